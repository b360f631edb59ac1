#include "nlj/fpt.hpp"

#include <array>
#include <cmath>
#include <cstdio>

namespace nlj {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void require_strict_interval(const ReducedModel& m) {
    if (!(m.y0 > 0.0 && m.y0 < m.a && m.a < 1.0))
        throw std::domain_error("requires 0 < y < a < 1 (y = " + num(m.y0) +
                                ", a = " + num(m.a) + ")");
}

void require_mean_interval(const ReducedModel& m) {
    if (!(m.y0 > 0.0 && m.y0 <= m.a && m.a < 1.0))
        throw std::domain_error("requires 0 < y <= a < 1 (y = " + num(m.y0) +
                                ", a = " + num(m.a) + ")");
}

// sum_n (c)_n/(n+1) z^{n+1} / W_phi(n+2), the block behind the mean formula.
double mean_block(const BernsteinPhi& phi, double c, double z, const SeriesControl& ctrl,
                  SeriesStats* stats) {
    auto ratio = [&](int n) {
        return Complex((c + n) * (n + 1.0) * z / ((n + 2.0) * phi.phi_int(n + 2)), 0.0);
    };
    const SeriesResult res = detail::sum_ratio_series(Complex(z / phi.phi_int(1), 0.0),
                                                      ratio, z, ctrl, "mean FPT series");
    if (stats) {
        stats->terms += res.terms;
        stats->truncation_estimate += res.truncation_estimate;
    }
    return res.real();
}

}  // namespace

KappaTheta solve_kappa_theta(const ReducedModel& m, double q) {
    if (q < 0.0) throw std::domain_error("Laplace argument q must be >= 0");
    const double s2 = m.sigma2;
    const double lb = m.lambda / s2 - 0.5;
    if (!(lb >= 0.0))
        throw std::domain_error("requires lambda > sigma^2/2 (lambda_bar = " + num(lb) + ")");

    KappaTheta kt;
    kt.lambda_bar = lb;
    kt.branch_q = 0.5 * s2 * lb * lb;
    if (q == 0.0) {
        kt.kappa = Complex(0.0, 0.0);
        kt.theta = Complex(2.0 * lb, 0.0);
        kt.real_branch = true;
        return kt;
    }
    const double disc = lb * lb - 2.0 * q / s2;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        kt.kappa = Complex(lb - s, 0.0);
        kt.theta = Complex(lb + s, 0.0);
        kt.real_branch = true;
    } else {
        const double s = std::sqrt(-disc);
        kt.kappa = Complex(lb, -s);
        kt.theta = Complex(lb, s);
        kt.real_branch = false;
    }
    return kt;
}

double laplace_fpt(const FptQuery& fq, const SeriesControl& ctrl) {
    fq.model.validate();
    require_strict_interval(fq.model);
    if (fq.q < 0.0) throw std::domain_error("Laplace argument q must be >= 0");
    BernsteinPhi phi(fq.model, fq.jumps);
    if (fq.q == 0.0) return 1.0;  // P_y(T_a < infty) = 1 under the entrance condition

    const KappaTheta kt = solve_kappa_theta(fq.model, fq.q);
    const SeriesResult fy = hyp2f1_phi(kt.kappa, kt.theta, phi, fq.model.y0, ctrl);
    const SeriesResult fa = hyp2f1_phi(kt.kappa, kt.theta, phi, fq.model.a, ctrl);
    return fy.real() / fa.real();
}

double mean_fpt_series(const ReducedModel& m, const JumpMeasure& j,
                       const SeriesControl& ctrl, SeriesStats* stats) {
    m.validate();
    require_mean_interval(m);
    BernsteinPhi phi(m, j);
    if (m.y0 == m.a) return 0.0;

    const double c = 2.0 * m.lambda / m.sigma2;
    return (2.0 / m.sigma2) * (mean_block(phi, c, m.a, ctrl, stats) -
                               mean_block(phi, c, m.y0, ctrl, stats));
}

double mean_fpt_classical(const ReducedModel& m, const SeriesControl& ctrl,
                          SeriesStats* stats) {
    m.validate();
    require_mean_interval(m);
    if (!(m.mu > 0.5 * m.sigma2))
        throw std::domain_error("classical model requires mu > sigma^2/2 (mu = " +
                                num(m.mu) + ", sigma^2/2 = " + num(0.5 * m.sigma2) + ")");
    if (m.y0 == m.a) return 0.0;

    const double c = 2.0 * m.lambda / m.sigma2;
    const double d = 2.0 * m.mu / m.sigma2 + 1.0;
    auto block = [&](double z) {
        // t_n = (c)_n/((d)_n (n+1)) z^{n+1}
        auto ratio = [&](int n) {
            return Complex((c + n) * (n + 1.0) * z / ((d + n) * (n + 2.0)), 0.0);
        };
        const SeriesResult res = detail::sum_ratio_series(
            Complex(z, 0.0), ratio, z, ctrl, "classical mean FPT series");
        if (stats) {
            stats->terms += res.terms;
            stats->truncation_estimate += res.truncation_estimate;
        }
        return res.real();
    };
    return (block(m.a) - block(m.y0)) / m.mu;
}

KPair solve_kpair(const ReducedModel& m, double alpha) {
    const double s2 = m.sigma2;
    const double b = alpha + 2.0 * m.mu / s2 - 1.0;
    const double c = 2.0 * alpha * m.mu / s2 - alpha - 2.0 / s2;
    // Discriminant equals (alpha - 2mu/sigma^2 + 1)^2 + 8/sigma^2 > 0.
    const double s = std::sqrt(b * b - 4.0 * c);
    KPair kp;
    kp.k_plus = 0.5 * (b + s);
    kp.k_minus = c / kp.k_plus;  // stable companion root
    return kp;
}

double mean_fpt_exponential(const ReducedModel& m, double alpha,
                            const SeriesControl& ctrl, SeriesStats* stats) {
    m.validate();
    require_mean_interval(m);
    if (!(alpha >= 1.0))
        throw std::domain_error("exponential jumps require alpha >= 1");
    if (!(0.5 * m.sigma2 < m.mu - 1.0 / alpha))
        throw std::domain_error(
            "entrance condition for exponential jumps requires sigma^2/2 < mu - 1/alpha "
            "(sigma^2/2 = " + num(0.5 * m.sigma2) + ", mu - 1/alpha = " +
            num(m.mu - 1.0 / alpha) + ")");
    if (m.y0 == m.a) return 0.0;

    const KPair kp = solve_kpair(m, alpha);
    const double c = 2.0 * m.lambda / m.sigma2;
    const std::array<double, 4> num_params{1.0, 1.0, alpha + 2.0, c};
    const std::array<double, 3> den_params{2.0, kp.k_plus + 2.0, kp.k_minus + 2.0};
    const SeriesResult fa = hyp_pfq(num_params, den_params, m.a, ctrl);
    const SeriesResult fy = hyp_pfq(num_params, den_params, m.y0, ctrl);
    if (stats) {
        stats->terms = fa.terms + fy.terms;
        stats->truncation_estimate = fa.truncation_estimate + fy.truncation_estimate;
    }
    const double pref =
        2.0 * (alpha + 1.0) / (m.sigma2 * (kp.k_plus + 1.0) * (kp.k_minus + 1.0));
    return pref * (m.a * fa.real() - m.y0 * fy.real());
}

double classical_laplace(const ReducedModel& m, double q, const SeriesControl& ctrl) {
    m.validate();
    require_strict_interval(m);
    if (!(m.mu > 0.5 * m.sigma2))
        throw std::domain_error("classical model requires mu > sigma^2/2");
    if (q == 0.0) return 1.0;

    const KappaTheta kt = solve_kappa_theta(m, q);
    const double c = 2.0 * m.mu / m.sigma2;
    const SeriesResult fy = gauss_2f1(kt.kappa, kt.theta, c, m.y0, ctrl);
    const SeriesResult fa = gauss_2f1(kt.kappa, kt.theta, c, m.a, ctrl);
    return fy.real() / fa.real();
}

double stationary_moment(const BernsteinPhi& phi, int n) {
    if (n < 0) throw std::domain_error("moment order must be >= 0");
    // W_phi(n+1)/(c)_n as a ratio product; the factors tend to 1, so this
    // never overflows even when W_phi itself would.
    const double c = 2.0 * phi.model().lambda / phi.model().sigma2;
    double acc = 1.0;
    for (int k = 1; k <= n; ++k) acc *= phi.phi_int(k) / (c + k - 1.0);
    return acc;
}

double stationary_variance(const BernsteinPhi& phi) {
    const double m1 = stationary_moment(phi, 1);
    const double m2 = stationary_moment(phi, 2);
    return std::max(0.0, m2 - m1 * m1);
}

RegimeLabel classify_regime(const ReducedModel& m, const JumpMeasure& j) {
    RegimeLabel label;
    label.margin = m.mu - m.a * m.lambda - j.exp_tail_moment();
    if (std::fabs(label.margin) <= 1e-12)
        label.regime = Regime::threshold;
    else
        label.regime = label.margin > 0.0 ? Regime::suprathreshold : Regime::subthreshold;
    return label;
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::subthreshold: return "subthreshold";
        case Regime::threshold: return "threshold";
        case Regime::suprathreshold: return "suprathreshold";
    }
    return "unknown";
}

MeanComparison compare_mean_fpt(const BernsteinPhi& phi, const BernsteinPhi& phi1,
                                const SeriesControl& ctrl) {
    const ReducedModel& m = phi.model();
    const ReducedModel& m1 = phi1.model();
    if (m.lambda != m1.lambda || m.sigma2 != m1.sigma2 || m.y0 != m1.y0 || m.a != m1.a)
        throw std::invalid_argument("comparison requires shared lambda, sigma2, y and a");

    MeanComparison cmp;
    cmp.comparable = true;
    for (int k = 0; k <= 400; ++k) {
        const double u = 0.25 * k;
        const double lhs = phi.phi(u);
        const double rhs = phi1.phi(u);
        if (rhs < lhs - 1e-12 * std::max(1.0, std::fabs(lhs))) {
            cmp.comparable = false;
            cmp.first_violation_u = u;
            break;
        }
    }
    cmp.mean_phi = mean_fpt_series(m, phi.jumps(), ctrl);
    cmp.mean_phi1 = mean_fpt_series(m1, phi1.jumps(), ctrl);
    return cmp;
}

double firing_rate(const FptQuery& fq, const SeriesControl& ctrl) {
    if (fq.model.y0 == fq.model.a)
        throw std::domain_error("degenerate query: y == a gives zero mean FPT");
    const double mean = mean_fpt_series(fq.model, fq.jumps, ctrl);
    return 1.0 / mean;
}

}  // namespace nlj
