#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

#include "nlj/config.hpp"
#include "nlj/csv.hpp"
#include "nlj/fpt.hpp"
#include "nlj/sim.hpp"
#include "nlj/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

struct CommonOpts {
    std::string config_path;
    std::string out_path;  // empty: stdout
    std::uint64_t seed = 0;
    int terms = 0;  // fixed-truncation override, 0 = adaptive
    double tol = 1e-12;
    int paths = 20000;
    double dt = 5e-4;
    double horizon = 1e4;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_mc) {
    cmd->add_option("--config", o.config_path, "configuration file (key = value)")
        ->required();
    cmd->add_option("--out", o.out_path, "output path (default: stdout)");
    cmd->add_option("--terms", o.terms, "fixed series truncation (0 = adaptive)");
    cmd->add_option("--tol", o.tol, "series relative tolerance");
    if (with_mc) {
        cmd->add_option("--seed", o.seed, "Monte Carlo seed");
        cmd->add_option("--paths", o.paths, "Monte Carlo paths");
        cmd->add_option("--dt", o.dt, "time step (ms)");
        cmd->add_option("--horizon", o.horizon, "simulation horizon (ms)");
        cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");
    }
}

nlj::SeriesControl series_control(const CommonOpts& o) {
    nlj::SeriesControl ctrl;
    ctrl.rel_tol = o.tol;
    ctrl.fixed_terms = o.terms;
    return ctrl;
}

void write_output(const CommonOpts& o, const std::string& text) {
    if (o.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(o.out_path);
    if (!out) throw nlj::ConfigError("cannot open output file '" + o.out_path + "'");
    out << text;
}

void write_table(const CommonOpts& o, const nlj::CsvTable& table) {
    write_output(o, table.to_string());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "first-passage statistics of the Jacobi neuronal model with downward jumps"};
    app.require_subcommand(1);

    CommonOpts o;

    // validate
    auto* c_validate = app.add_subcommand("validate", "check a configuration");
    add_common(c_validate, o, false);

    // mean-fpt
    auto* c_mean = app.add_subcommand("mean-fpt", "mean first passage time");
    std::string method = "series";
    bool force_classical = false;
    add_common(c_mean, o, true);
    c_mean->add_option("--method", method, "series | closed | classical | mc")
        ->check(CLI::IsMember({"series", "closed", "classical", "mc"}));
    c_mean->add_flag("--force-classical", force_classical,
                     "allow method=classical although jumps are configured");

    // laplace
    auto* c_laplace = app.add_subcommand("laplace", "Laplace transform on a q-grid");
    double q_from = 0.0, q_to = 1.0;
    int q_steps = 11;
    add_common(c_laplace, o, false);
    c_laplace->add_option("--q-from", q_from, "grid start (ms^-1)");
    c_laplace->add_option("--q-to", q_to, "grid end (ms^-1)");
    c_laplace->add_option("--q-steps", q_steps, "grid points");

    // simulate
    auto* c_sim = app.add_subcommand("simulate", "Monte Carlo path / FPT dumps");
    std::string mode = "path";
    add_common(c_sim, o, true);
    c_sim->add_option("--mode", mode, "path | fpt")
        ->check(CLI::IsMember({"path", "fpt"}));

    // sweep-alpha
    auto* c_alpha = app.add_subcommand(
        "sweep-alpha", "mean FPT against the jump shape parameter alpha");
    double a_from = 1.0, a_to = 10.0;
    int a_steps = 100;
    bool no_mc = false;
    add_common(c_alpha, o, true);
    c_alpha->add_option("--from", a_from, "alpha grid start");
    c_alpha->add_option("--to", a_to, "alpha grid end");
    c_alpha->add_option("--steps", a_steps, "alpha grid points");
    c_alpha->add_flag("--no-mc", no_mc, "skip the Monte Carlo overlay");

    // heatmap
    auto* c_heat = app.add_subcommand("heatmap", "mean FPT over (nu_e, nu_i)");
    std::string model = "nonlocal";
    double he_from = 0.0, he_to = 0.0, hi_from = 0.0, hi_to = 0.0;
    int he_steps = 10, hi_steps = 10;
    add_common(c_heat, o, false);
    c_heat->add_option("--model", model, "nonlocal | classical")
        ->check(CLI::IsMember({"nonlocal", "classical"}));
    c_heat->add_option("--nu-e-from", he_from,
                       "nu_e grid start (default: 1.02x the entrance bound)");
    c_heat->add_option("--nu-e-to", he_to,
                       "nu_e grid end (default: 1.5x the entrance bound)");
    c_heat->add_option("--nu-e-steps", he_steps, "nu_e grid points");
    c_heat->add_option("--nu-i-from", hi_from, "nu_i grid start (default: 0.5)");
    c_heat->add_option("--nu-i-to", hi_to, "nu_i grid end (default: 2)");
    c_heat->add_option("--nu-i-steps", hi_steps, "nu_i grid points");

    // firing-rate
    auto* c_rate = app.add_subcommand(
        "firing-rate", "non-local and classical firing rates against nu_e");
    double r_from = 0.0, r_to = 0.0;
    int r_steps = 50;
    add_common(c_rate, o, false);
    c_rate->add_option("--from", r_from,
                       "nu_e grid start (default: 1.05x the entrance bound)");
    c_rate->add_option("--to", r_to, "nu_e grid end (default: 4x the start)");
    c_rate->add_option("--steps", r_steps, "nu_e grid points");

    // sigma-curves
    auto* c_sigma = app.add_subcommand(
        "sigma-curves", "mean FPT against sigma^2 for fixed lambda/mu ratios");
    double s_from = 0.1, s_to = 1.0;
    int s_steps = 10;
    std::vector<double> ratios;
    add_common(c_sigma, o, false);
    c_sigma->add_option("--from", s_from, "sigma^2 grid start (ms^-1)");
    c_sigma->add_option("--to", s_to, "sigma^2 grid end (ms^-1)");
    c_sigma->add_option("--steps", s_steps, "sigma^2 grid points");
    c_sigma->add_option("--ratios", ratios, "lambda/mu ratios (default: 1.1 1.3 1.5)")
        ->expected(-1);

    CLI11_PARSE(app, argc, argv);

    try {
        const nlj::Config cfg = nlj::load_config(o.config_path);
        const nlj::SeriesControl ctrl = series_control(o);

        if (app.got_subcommand(c_validate)) {
            write_output(o, nlj::validate_report(cfg));
            return kExitOk;
        }

        const nlj::ReducedModel m = nlj::reduce(cfg.phys);

        if (app.got_subcommand(c_mean)) {
            const bool have_jumps = cfg.jump_kind != "none";
            std::ostringstream os;
            os << nlj::config_comment_block(cfg);
            nlj::SeriesStats stats;
            if (method == "series") {
                const double v = nlj::mean_fpt_series(m, cfg.jumps, ctrl, &stats);
                os << "mean_fpt_ms = " << nlj::format_number(v)
                   << " method = series terms = " << stats.terms << " truncation = "
                   << nlj::format_number(stats.truncation_estimate) << "\n";
            } else if (method == "closed") {
                if (cfg.jump_kind != "exponential")
                    throw nlj::ConfigError(
                        "method = closed requires exponential jumps in the config");
                const double v =
                    nlj::mean_fpt_exponential(m, cfg.jumps.alpha(), ctrl, &stats);
                os << "mean_fpt_ms = " << nlj::format_number(v)
                   << " method = closed terms = " << stats.terms << " truncation = "
                   << nlj::format_number(stats.truncation_estimate) << "\n";
            } else if (method == "classical") {
                if (have_jumps && !force_classical)
                    throw nlj::ConfigError(
                        "method = classical ignores the configured jumps; pass "
                        "--force-classical to proceed");
                const double v = nlj::mean_fpt_classical(m, ctrl, &stats);
                os << "mean_fpt_ms = " << nlj::format_number(v)
                   << " method = classical terms = " << stats.terms << " truncation = "
                   << nlj::format_number(stats.truncation_estimate) << "\n";
            } else {  // mc
                nlj::PathConfig pc;
                pc.dt = o.dt;
                pc.horizon = o.horizon;
                pc.seed = o.seed;
                pc.paths = o.paths;
                pc.threads = o.threads;
                const nlj::FptEstimate est = nlj::estimate_fpt(m, cfg.jumps, pc);
                os << "mean_fpt_ms = " << nlj::format_number(est.mean)
                   << " method = mc paths = " << est.paths
                   << " stderr = " << nlj::format_number(est.stderr_mean)
                   << " censor_rate = " << nlj::format_number(est.censor_rate);
                if (est.horizon_warning)
                    os << " warning = censor_rate_above_10_percent";
                os << "\n";
            }
            write_output(o, os.str());
            return kExitOk;
        }

        if (app.got_subcommand(c_laplace)) {
            write_table(o, nlj::laplace_table(cfg, {"q", q_from, q_to, q_steps}, ctrl));
            return kExitOk;
        }

        if (app.got_subcommand(c_sim)) {
            nlj::PathConfig pc;
            pc.dt = o.dt;
            pc.horizon = o.horizon;
            pc.seed = o.seed;
            pc.paths = o.paths;
            pc.threads = o.threads;
            if (mode == "path") {
                pc.paths = 1;
                pc.record_jumps = true;
                const nlj::PathRecord rec = nlj::simulate_path(m, cfg.jumps, pc);
                nlj::CsvTable table({"t_ms", "y", "jumped"});
                table.add_comment("nlj simulate path");
                table.add_comment_block(nlj::config_comment_block(cfg));
                table.add_comment("seed = " + std::to_string(pc.seed) +
                                  ", dt = " + nlj::format_number(pc.dt) + " ms");
                std::size_t ev = 0;
                for (std::size_t i = 0; i < rec.times.size(); ++i) {
                    int jumped = 0;
                    if (ev < rec.jump_events.size() &&
                        rec.jump_events[ev].time == rec.times[i]) {
                        jumped = 1;
                        ++ev;
                    }
                    auto row = table.make_row();
                    table.add_row(std::move(
                        row.num(rec.times[i]).num(rec.values[i]).integer(jumped)));
                }
                write_table(o, table);
            } else {
                const auto samples = nlj::sample_fpt(m, cfg.jumps, pc);
                nlj::CsvTable table({"hit_time_ms", "censored"});
                table.add_comment("nlj simulate fpt");
                table.add_comment_block(nlj::config_comment_block(cfg));
                table.add_comment("seed = " + std::to_string(pc.seed) +
                                  ", dt = " + nlj::format_number(pc.dt) +
                                  " ms, horizon = " + nlj::format_number(pc.horizon) +
                                  " ms");
                for (const auto& s : samples) {
                    auto row = table.make_row();
                    table.add_row(std::move(row.num(s.hit_time).integer(s.crossed ? 0 : 1)));
                }
                write_table(o, table);
            }
            return kExitOk;
        }

        if (app.got_subcommand(c_alpha)) {
            nlj::MonteCarloOptions mc;
            mc.paths = o.paths;
            mc.dt = o.dt;
            mc.horizon = o.horizon;
            mc.seed = o.seed;
            mc.threads = o.threads;
            mc.enabled = !no_mc;
            write_table(o, nlj::sweep_alpha(cfg, {"alpha", a_from, a_to, a_steps}, mc, ctrl));
            return kExitOk;
        }

        if (app.got_subcommand(c_heat)) {
            const double bound = model == "classical"
                                     ? nlj::nu_e_entrance_bound_classical(cfg.phys)
                                     : nlj::nu_e_entrance_bound(cfg.phys, cfg.alpha);
            if (he_from == 0.0 && he_to == 0.0) {
                he_from = std::max(bound, 0.0) * 1.02 + (bound <= 0.0 ? 0.1 : 0.0);
                he_to = std::max(bound, 0.2) * 1.5;
            }
            if (hi_from == 0.0 && hi_to == 0.0) {
                hi_from = 0.5;
                hi_to = 2.0;
            }
            write_table(o, nlj::heatmap(cfg, {"nu_e", he_from, he_to, he_steps},
                                        {"nu_i", hi_from, hi_to, hi_steps}, model, ctrl));
            return kExitOk;
        }

        if (app.got_subcommand(c_rate)) {
            if (r_from == 0.0 && r_to == 0.0) {
                const double bound = cfg.jump_kind == "exponential"
                                         ? nlj::nu_e_entrance_bound(cfg.phys, cfg.alpha)
                                         : nlj::nu_e_entrance_bound_classical(cfg.phys);
                r_from = std::max(bound * 1.05, 0.1);
                r_to = 4.0 * r_from;
            }
            write_table(o, nlj::firing_rate_sweep(cfg, {"nu_e", r_from, r_to, r_steps}, ctrl));
            return kExitOk;
        }

        if (app.got_subcommand(c_sigma)) {
            if (ratios.empty()) ratios = {1.1, 1.3, 1.5};
            write_table(o, nlj::sigma_curves(cfg, {"sigma2", s_from, s_to, s_steps},
                                             ratios, ctrl));
            return kExitOk;
        }
    } catch (const nlj::ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kExitConfig;
    } catch (const nlj::SeriesError& err) {
        std::cerr << "numerical failure: " << err.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& err) {
        std::cerr << "numerical failure: " << err.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
