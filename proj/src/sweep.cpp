#include "nlj/sweep.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nlj {

namespace {

Config with_rates(const Config& cfg, double nu_e, double nu_i) {
    Config out = cfg;
    out.phys.nu_e = nu_e;
    out.phys.nu_i = nu_i;
    return out;
}

// Grid-point guard shared by the sweeps: "" when usable, otherwise a
// status flag for the emitted row.
std::string nonlocal_status(const ReducedModel& m, const JumpMeasure& j) {
    if (!entrance_check(m, j).ok) return "invalid_entrance";
    return "";
}

std::string classical_status(const ReducedModel& m) {
    if (!(m.mu > 0.5 * m.sigma2)) return "invalid_entrance";
    return "";
}

}  // namespace

std::vector<double> SweepSpec::grid() const {
    validate();
    std::vector<double> g(static_cast<std::size_t>(steps));
    if (steps == 1) {
        g[0] = from;
        return g;
    }
    const double h = (to - from) / (steps - 1);
    for (int k = 0; k < steps; ++k) g[static_cast<std::size_t>(k)] = from + h * k;
    g.back() = to;
    return g;
}

void SweepSpec::validate() const {
    if (steps < 1) throw std::invalid_argument("sweep needs at least one grid point");
    if (steps > 1 && !(from < to))
        throw std::invalid_argument("sweep requires from < to");
}

double nu_e_entrance_bound(const PhysiologicalParams& p, double alpha) {
    return (p.v_inh / (p.tau * (p.v_exc - p.v_inh)) + 0.5 * p.sigma2 + 1.0 / alpha) /
           p.e_amp;
}

double nu_e_entrance_bound_classical(const PhysiologicalParams& p) {
    return (p.v_inh / (p.tau * (p.v_exc - p.v_inh)) + 0.5 * p.sigma2) / p.e_amp;
}

std::string validate_report(const Config& cfg) {
    const ReducedModel m = reduce(cfg.phys);
    const EntranceReport rep = entrance_check(m, cfg.jumps);
    const RegimeLabel regime = classify_regime(m, cfg.jumps);

    std::ostringstream os;
    os << "lambda = " << format_number(m.lambda) << " ms^-1\n"
       << "mu = " << format_number(m.mu) << " ms^-1\n"
       << "sigma2 = " << format_number(m.sigma2) << " ms^-1\n"
       << "y = " << format_number(m.y0) << ", a = " << format_number(m.a) << "\n"
       << "hbar = " << format_number(rep.hbar) << "\n"
       << "phi(0) = " << format_number(rep.phi0) << "\n"
       << "entrance condition (mu > hbar + sigma^2/2): "
       << (rep.ok ? "satisfied" : "VIOLATED") << "\n"
       << "  " << rep.message << "\n"
       << "regime: " << regime_name(regime.regime)
       << " (margin = " << format_number(regime.margin) << " ms^-1)\n";
    if (cfg.jump_kind == "exponential") {
        const double bound = nu_e_entrance_bound(cfg.phys, cfg.jumps.alpha());
        os << "nu_e bound (entrance, exponential jumps): nu_e > "
           << format_number(bound) << " ms^-1 (config nu_e = "
           << format_number(cfg.phys.nu_e) << " ms^-1)\n";
    }
    return os.str();
}

CsvTable sweep_alpha(const Config& cfg, const SweepSpec& spec,
                     const MonteCarloOptions& mc, const SeriesControl& ctrl) {
    CsvTable table({"alpha", "mean_analytic_ms", "mean_mc_ms", "mc_stderr_ms", "status"});
    table.add_comment("nlj sweep-alpha");
    table.add_comment_block(config_comment_block(cfg));
    if (mc.enabled) {
        table.add_comment("mc: paths = " + std::to_string(mc.paths) +
                          ", dt = " + format_number(mc.dt) + " ms, horizon = " +
                          format_number(mc.horizon) + " ms, seed = " +
                          std::to_string(mc.seed));
    }

    const ReducedModel base = reduce(cfg.phys);
    const auto grid = spec.grid();
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        const double alpha = grid[idx];
        auto row = table.make_row();
        row.num(alpha);
        if (!(alpha >= 1.0)) {
            table.add_row(std::move(
                row.text("na").text("na").text("na").text("invalid_alpha")));
            continue;
        }
        const JumpMeasure jumps = JumpMeasure::exponential(alpha);
        if (const auto status = nonlocal_status(base, jumps); !status.empty()) {
            table.add_row(std::move(row.text("na").text("na").text("na").text(status)));
            continue;
        }
        try {
            const double mean = mean_fpt_series(base, jumps, ctrl);
            row.num(mean);
        } catch (const SeriesError&) {
            table.add_row(std::move(
                row.text("na").text("na").text("na").text("series_error")));
            continue;
        }
        if (mc.enabled) {
            PathConfig pc;
            pc.dt = mc.dt;
            pc.horizon = mc.horizon;
            pc.seed = mc.seed;
            pc.paths = mc.paths;
            pc.threads = mc.threads;
            pc.stream_offset = idx * static_cast<std::uint64_t>(mc.paths);
            const FptEstimate est = estimate_fpt(base, jumps, pc);
            row.num(est.mean).num(est.stderr_mean);
            table.add_row(std::move(
                row.text(est.horizon_warning ? "ok_censored" : "ok")));
        } else {
            table.add_row(std::move(row.text("na").text("na").text("ok")));
        }
    }
    return table;
}

CsvTable laplace_table(const Config& cfg, const SweepSpec& q_spec,
                       const SeriesControl& ctrl) {
    CsvTable table({"q_per_ms", "laplace", "branch", "status"});
    table.add_comment("nlj laplace");
    table.add_comment_block(config_comment_block(cfg));

    const ReducedModel m = reduce(cfg.phys);
    for (double q : q_spec.grid()) {
        auto row = table.make_row();
        row.num(q);
        if (q < 0.0) {
            table.add_row(std::move(row.text("na").text("na").text("invalid_param")));
            continue;
        }
        try {
            const FptQuery fq{m, cfg.jumps, q};
            const double value = laplace_fpt(fq, ctrl);
            const KappaTheta kt = solve_kappa_theta(m, q);
            table.add_row(std::move(
                row.num(value).text(kt.real_branch ? "real" : "complex").text("ok")));
        } catch (const SeriesError&) {
            table.add_row(std::move(row.text("na").text("na").text("series_error")));
        } catch (const std::domain_error&) {
            table.add_row(std::move(row.text("na").text("na").text("invalid_entrance")));
        }
    }
    return table;
}

CsvTable heatmap(const Config& cfg, const SweepSpec& nu_e_spec,
                 const SweepSpec& nu_i_spec, const std::string& model,
                 const SeriesControl& ctrl) {
    if (model != "nonlocal" && model != "classical")
        throw std::invalid_argument("heatmap model must be nonlocal or classical");
    const bool jumps_on = model == "nonlocal";

    CsvTable table({"nu_e_per_ms", "nu_i_per_ms", "mean_fpt_ms", "status"});
    table.add_comment("nlj heatmap (" + model + ")");
    table.add_comment_block(config_comment_block(cfg));

    for (double nu_e : nu_e_spec.grid()) {
        for (double nu_i : nu_i_spec.grid()) {
            auto row = table.make_row();
            row.num(nu_e).num(nu_i);
            if (!(nu_e > 0.0) || !(nu_i > 0.0)) {
                table.add_row(std::move(row.text("na").text("invalid_param")));
                continue;
            }
            const ReducedModel m = reduce(with_rates(cfg, nu_e, nu_i).phys);
            const std::string status =
                jumps_on ? nonlocal_status(m, cfg.jumps) : classical_status(m);
            if (!status.empty()) {
                table.add_row(std::move(row.text("na").text(status)));
                continue;
            }
            try {
                const double mean = jumps_on ? mean_fpt_series(m, cfg.jumps, ctrl)
                                             : mean_fpt_classical(m, ctrl);
                table.add_row(std::move(row.num(mean).text("ok")));
            } catch (const SeriesError&) {
                table.add_row(std::move(row.text("na").text("series_error")));
            }
        }
    }
    return table;
}

double regime_transition_nu_e(const Config& cfg, bool with_jumps) {
    const JumpMeasure jm = with_jumps ? cfg.jumps : JumpMeasure::none();
    auto margin = [&](double nu_e) {
        const ReducedModel m = reduce(with_rates(cfg, nu_e, cfg.phys.nu_i).phys);
        return classify_regime(m, jm).margin;
    };
    // The margin is affine in nu_e with slope e (1 - a) > 0; two points pin
    // the root exactly.
    const double m1 = margin(1.0);
    const double m2 = margin(2.0);
    return 1.0 - m1 / (m2 - m1);
}

CsvTable firing_rate_sweep(const Config& cfg, const SweepSpec& nu_e_spec,
                           const SeriesControl& ctrl) {
    CsvTable table({"row", "nu_e_per_ms", "rate_nonlocal_per_ms", "rate_classical_per_ms",
                    "regime_nonlocal", "regime_classical", "status"});
    table.add_comment("nlj firing-rate");
    table.add_comment_block(config_comment_block(cfg));

    auto emit = [&](const std::string& kind, double nu_e) {
        auto row = table.make_row();
        row.text(kind).num(nu_e);
        if (!(nu_e > 0.0)) {
            table.add_row(std::move(
                row.text("na").text("na").text("na").text("na").text("invalid_param")));
            return;
        }
        const ReducedModel m = reduce(with_rates(cfg, nu_e, cfg.phys.nu_i).phys);
        std::string status = "ok";

        if (nonlocal_status(m, cfg.jumps).empty()) {
            try {
                row.num(firing_rate(FptQuery{m, cfg.jumps, 0.0}, ctrl));
            } catch (const SeriesError&) {
                row.text("na");
                status = "series_error";
            }
        } else {
            row.text("na");
            status = "invalid_entrance";
        }
        if (classical_status(m).empty()) {
            try {
                row.num(1.0 / mean_fpt_classical(m, ctrl));
            } catch (const SeriesError&) {
                row.text("na");
                status = "series_error";
            }
        } else {
            row.text("na");
            if (status == "ok") status = "invalid_entrance";
        }
        row.text(regime_name(classify_regime(m, cfg.jumps).regime));
        row.text(regime_name(classify_regime(m, JumpMeasure::none()).regime));
        table.add_row(std::move(row.text(status)));
    };

    for (double nu_e : nu_e_spec.grid()) emit("grid", nu_e);
    emit("transition_nonlocal", regime_transition_nu_e(cfg, true));
    emit("transition_classical", regime_transition_nu_e(cfg, false));
    return table;
}

CsvTable sigma_curves(const Config& cfg, const SweepSpec& sigma2_spec,
                      const std::vector<double>& ratios, const SeriesControl& ctrl) {
    if (cfg.jump_kind != "exponential")
        throw ConfigError("sigma-curves requires exponential jumps in the config");
    if (ratios.empty()) throw std::invalid_argument("sigma-curves needs ratios");

    CsvTable table({"sigma2_per_ms", "lambda_over_mu", "mean_fpt_ms", "status"});
    table.add_comment("nlj sigma-curves");
    table.add_comment_block(config_comment_block(cfg));

    const ReducedModel base = reduce(cfg.phys);
    for (double ratio : ratios) {
        // Realize lambda/mu = ratio by adjusting nu_i at fixed nu_e:
        // lambda = 1/tau + mu_e - i*nu_i while mu does not depend on nu_i.
        const double nu_i =
            (1.0 / cfg.phys.tau + cfg.phys.mu_e() - ratio * base.mu) / cfg.phys.i_amp;
        const bool ratio_ok = nu_i > 0.0;
        if (ratio_ok)
            table.add_comment("ratio " + format_number(ratio) +
                              ": nu_i = " + format_number(nu_i) + " ms^-1");
        else
            table.add_comment("ratio " + format_number(ratio) +
                              ": unreachable (needs nu_i <= 0)");

        for (double s2 : sigma2_spec.grid()) {
            auto row = table.make_row();
            row.num(s2).num(ratio);
            if (!ratio_ok || !(s2 > 0.0)) {
                table.add_row(std::move(row.text("na").text("invalid_param")));
                continue;
            }
            Config point = with_rates(cfg, cfg.phys.nu_e, nu_i);
            point.phys.sigma2 = s2;
            const ReducedModel m = reduce(point.phys);
            if (const auto status = nonlocal_status(m, cfg.jumps); !status.empty()) {
                table.add_row(std::move(row.text("na").text(status)));
                continue;
            }
            try {
                table.add_row(std::move(row.num(mean_fpt_series(m, cfg.jumps, ctrl)).text("ok")));
            } catch (const SeriesError&) {
                table.add_row(std::move(row.text("na").text("series_error")));
            }
        }
    }
    return table;
}

}  // namespace nlj
