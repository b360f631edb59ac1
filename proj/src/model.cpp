#include "nlj/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace nlj {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

[[noreturn]] void reject(const std::string& what) {
    throw std::invalid_argument(what);
}

}  // namespace

void PhysiologicalParams::validate() const {
    if (!(v_inh < 0.0)) reject("V_I must be < 0 mV (got " + num(v_inh) + ")");
    if (!(v_exc > 0.0)) reject("V_E must be > 0 mV (got " + num(v_exc) + ")");
    if (!(tau > 0.0)) reject("tau must be > 0 ms (got " + num(tau) + ")");
    if (!(nu_e > 0.0)) reject("nu_e must be > 0 ms^-1 (got " + num(nu_e) + ")");
    if (!(nu_i > 0.0)) reject("nu_i must be > 0 ms^-1 (got " + num(nu_i) + ")");
    if (!(e_amp > 0.0 && e_amp < 1.0))
        reject("e must lie in (0,1) (got " + num(e_amp) + ")");
    // -1 is accepted: the boundary value appears in published parameter
    // sets and is harmless for the diffusion limit.
    if (!(i_amp >= -1.0 && i_amp < 0.0))
        reject("i must lie in [-1,0) (got " + num(i_amp) + ")");
    if (!(sigma2 > 0.0)) reject("sigma2 must be > 0 ms^-1 (got " + num(sigma2) + ")");
    if (!(threshold > v_inh && threshold < v_exc))
        reject("S must lie in (V_I, V_E) (got " + num(threshold) + ")");
    if (!(reset >= v_inh && reset < threshold))
        reject("x0 must lie in [V_I, S) (got " + num(reset) + ")");
}

void ReducedModel::validate() const {
    if (!(sigma2 > 0.0)) reject("sigma2 must be > 0 (got " + num(sigma2) + ")");
    if (!(lambda > mu)) reject("lambda must exceed mu (lambda = " + num(lambda) +
                               ", mu = " + num(mu) + ")");
    if (!(y0 >= 0.0 && y0 < 1.0)) reject("y must lie in [0,1) (got " + num(y0) + ")");
    if (!(a > 0.0 && a <= 1.0)) reject("a must lie in (0,1] (got " + num(a) + ")");
    if (!(y0 <= a)) reject("y must not exceed a (y = " + num(y0) + ", a = " + num(a) + ")");
}

double to_voltage_coord(const PhysiologicalParams& p, double y) {
    return (p.v_exc - p.v_inh) * y + p.v_inh;
}

double to_unit_coord(const PhysiologicalParams& p, double x) {
    return (x - p.v_inh) / (p.v_exc - p.v_inh);
}

ReducedModel reduce(const PhysiologicalParams& p) {
    p.validate();
    ReducedModel m;
    m.lambda = 1.0 / p.tau + p.mu_e() - p.mu_i();
    m.mu = p.mu_e() - p.v_inh / (p.tau * (p.v_exc - p.v_inh));
    m.sigma2 = p.sigma2;
    m.y0 = to_unit_coord(p, p.reset);
    m.a = to_unit_coord(p, p.threshold);
    m.validate();
    return m;
}

JumpMeasure JumpMeasure::none() {
    JumpMeasure j;
    j.kind_ = Kind::none;
    return j;
}

JumpMeasure JumpMeasure::exponential(double alpha) {
    if (!(alpha >= 1.0))
        reject("exponential jump measure requires alpha >= 1 (got " + num(alpha) + ")");
    JumpMeasure j;
    j.kind_ = Kind::exponential;
    j.alpha_ = alpha;
    j.mass_ = 1.0;
    j.hbar_ = 1.0 / alpha;
    return j;
}

JumpMeasure JumpMeasure::tabulated(std::vector<double> r, std::vector<double> density) {
    if (r.size() != density.size())
        reject("jump table columns differ in length");
    if (r.size() < 2) reject("jump table needs at least two rows");
    for (std::size_t k = 0; k < r.size(); ++k) {
        if (!std::isfinite(r[k]) || !std::isfinite(density[k]))
            reject("jump table contains a non-finite entry");
        if (!(r[k] > 0.0)) reject("jump table r values must be > 0");
        if (k > 0 && !(r[k] > r[k - 1]))
            reject("jump table r values must be strictly increasing");
        if (density[k] < 0.0) reject("jump table density must be nonnegative");
    }

    JumpMeasure j;
    j.kind_ = Kind::tabulated;
    j.r_ = std::move(r);
    j.p_ = std::move(density);

    const std::size_t n = j.r_.size();
    j.cdf_.assign(n, 0.0);
    double hbar = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const double h = j.r_[k] - j.r_[k - 1];
        j.cdf_[k] = j.cdf_[k - 1] + 0.5 * h * (j.p_[k] + j.p_[k - 1]);
        hbar += 0.5 * h * (j.r_[k] * j.p_[k] + j.r_[k - 1] * j.p_[k - 1]);
    }
    j.mass_ = j.cdf_.back();
    j.hbar_ = hbar;
    if (!(j.mass_ > 0.0)) reject("jump table carries zero mass");

    j.tail_.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) j.tail_[k] = j.mass_ - j.cdf_[k];
    return j;
}

double JumpMeasure::alpha() const {
    if (kind_ != Kind::exponential)
        throw std::logic_error("alpha() requires an exponential jump measure");
    return alpha_;
}

double JumpMeasure::tail(double r) const {
    switch (kind_) {
        case Kind::none:
            return 0.0;
        case Kind::exponential:
            return r <= 0.0 ? 1.0 : std::exp(-alpha_ * r);
        case Kind::tabulated: {
            if (r <= r_.front()) return mass_;
            if (r >= r_.back()) return 0.0;
            const auto it = std::upper_bound(r_.begin(), r_.end(), r);
            const std::size_t k = static_cast<std::size_t>(it - r_.begin()) - 1;
            const double h = r_[k + 1] - r_[k];
            const double x = r - r_[k];
            const double slope = (p_[k + 1] - p_[k]) / h;
            const double seg = p_[k] * x + 0.5 * slope * x * x;
            return mass_ - (cdf_[k] + seg);
        }
    }
    return 0.0;
}

double JumpMeasure::jump_integral(double u) const {
    if (u == 0.0) return 0.0;
    switch (kind_) {
        case Kind::none:
            return 0.0;
        case Kind::exponential:
            // int (1 - e^{-ur}) e^{-alpha r} dr = 1/alpha - 1/(u+alpha)
            return 1.0 / alpha_ - 1.0 / (u + alpha_);
        case Kind::tabulated: {
            // Trapezoid on {0} + grid; Pi_bar is constant (= mass) below the
            // first node and zero beyond the last.
            double acc = 0.0;
            double x_prev = 0.0;
            double f_prev = 0.0;  // integrand vanishes at r = 0
            for (std::size_t k = 0; k < r_.size(); ++k) {
                const double f = -std::expm1(-u * r_[k]) * tail_[k];
                acc += 0.5 * (r_[k] - x_prev) * (f + f_prev);
                x_prev = r_[k];
                f_prev = f;
            }
            return acc;
        }
    }
    return 0.0;
}

double JumpMeasure::exp_tail_moment() const {
    switch (kind_) {
        case Kind::none:
            return 0.0;
        case Kind::exponential:
            return 1.0 / (1.0 + alpha_);
        case Kind::tabulated: {
            double acc = 0.0;
            double x_prev = 0.0;
            double f_prev = mass_;  // e^{-0} * Pi_bar(0)
            for (std::size_t k = 0; k < r_.size(); ++k) {
                const double f = std::exp(-r_[k]) * tail_[k];
                acc += 0.5 * (r_[k] - x_prev) * (f + f_prev);
                x_prev = r_[k];
                f_prev = f;
            }
            return acc;
        }
    }
    return 0.0;
}

double JumpMeasure::sample(double unif) const {
    switch (kind_) {
        case Kind::none:
            throw std::logic_error("cannot sample from an empty jump measure");
        case Kind::exponential:
            return -std::log1p(-unif) / alpha_;
        case Kind::tabulated: {
            const double target = unif * mass_;
            auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
            if (it == cdf_.end()) return r_.back();
            std::size_t k = static_cast<std::size_t>(it - cdf_.begin());
            if (k == 0) return r_.front();
            --k;
            const double t = target - cdf_[k];
            const double h = r_[k + 1] - r_[k];
            const double slope = (p_[k + 1] - p_[k]) / h;
            double x;
            if (std::fabs(slope) * h < 1e-14 * std::max(p_[k], 1e-300)) {
                x = t / p_[k];
            } else {
                // Solve p_k x + slope x^2/2 = t on the segment.
                x = (-p_[k] + std::sqrt(p_[k] * p_[k] + 2.0 * slope * t)) / slope;
            }
            return r_[k] + std::clamp(x, 0.0, h);
        }
    }
    return 0.0;
}

EntranceReport entrance_check(const ReducedModel& m, const JumpMeasure& j) {
    EntranceReport rep;
    rep.mu = m.mu;
    rep.hbar = j.hbar();
    rep.half_sigma2 = 0.5 * m.sigma2;
    rep.phi0 = (2.0 / m.sigma2) * (m.mu - rep.hbar - rep.half_sigma2);
    rep.ok = m.mu > rep.hbar + rep.half_sigma2;
    rep.borderline = rep.ok && rep.phi0 < 1e-12;

    std::string msg = "mu = " + num(rep.mu) + ", hbar = " + num(rep.hbar) +
                      ", sigma^2/2 = " + num(rep.half_sigma2) +
                      ", phi(0) = " + num(rep.phi0);
    if (j.kind() == JumpMeasure::Kind::exponential) {
        msg += "; exponential form sigma^2/2 < mu - 1/alpha: " + num(rep.half_sigma2) +
               (rep.ok ? " < " : " >= ") + num(rep.mu - 1.0 / j.alpha());
    }
    msg += rep.ok ? " (entrance boundary)" : " (entrance condition VIOLATED)";
    if (rep.borderline)
        msg += "; warning: phi(0) < 1e-12, W_phi underflows slowly";
    rep.message = std::move(msg);
    return rep;
}

void SeriesControl::validate() const {
    if (!(rel_tol > 0.0)) reject("rel_tol must be > 0");
    if (streak < 1) reject("streak must be >= 1");
    if (max_terms < streak) reject("max_terms must be >= streak");
    if (fixed_terms < 0) reject("fixed_terms must be >= 0");
}

BernsteinPhi::BernsteinPhi(ReducedModel m, JumpMeasure j)
    : model_(m), jumps_(std::move(j)) {
    model_.validate();
    const EntranceReport rep = entrance_check(model_, jumps_);
    if (!rep.ok)
        throw std::domain_error("phi(0) <= 0; " + rep.message);
    phi0_ = rep.phi0;
    phi_k_.reserve(64);
    w_.reserve(65);
    logw_.reserve(65);
    w_.push_back(1.0);     // W_phi(1)
    logw_.push_back(0.0);
}

double BernsteinPhi::phi(double u) const {
    if (!(u >= 0.0)) throw std::domain_error("phi requires u >= 0");
    return u + phi0_ + (2.0 / model_.sigma2) * jumps_.jump_integral(u);
}

void BernsteinPhi::extend(int k) const {
    while (static_cast<int>(phi_k_.size()) < k) {
        const int next = static_cast<int>(phi_k_.size()) + 1;
        const double v = phi(static_cast<double>(next));
        phi_k_.push_back(v);
        w_.push_back(w_.back() * v);  // W_phi(next+1) = W_phi(next) * phi(next)
        logw_.push_back(logw_.back() + std::log(v));
    }
}

double BernsteinPhi::phi_int(int k) const {
    if (k < 1) throw std::domain_error("phi_int requires k >= 1");
    std::lock_guard<std::mutex> guard(lock_);
    if (static_cast<int>(phi_k_.size()) < k) extend(k);
    return phi_k_[static_cast<std::size_t>(k) - 1];
}

double BernsteinPhi::wphi(int n) const {
    if (n < 1) throw std::domain_error("W_phi requires n >= 1");
    std::lock_guard<std::mutex> guard(lock_);
    if (static_cast<int>(w_.size()) < n) extend(n - 1);
    const double v = w_[static_cast<std::size_t>(n) - 1];
    if (!std::isfinite(v))
        throw std::range_error("W_phi(" + std::to_string(n) +
                               ") exceeds the double range; use log_wphi");
    return v;
}

double BernsteinPhi::log_wphi(int n) const {
    if (n < 1) throw std::domain_error("W_phi requires n >= 1");
    std::lock_guard<std::mutex> guard(lock_);
    if (static_cast<int>(logw_.size()) < n) extend(n - 1);
    return logw_[static_cast<std::size_t>(n) - 1];
}

std::pair<ReducedModel, JumpMeasure> special_preset(double mu, double lambda,
                                                    double y0, double a) {
    if (!(mu > 2.0))
        throw std::invalid_argument(
            "special preset requires mu > 2 so that phi(0) = mu(mu-2)/(mu-1) > 0 "
            "(got mu = " + num(mu) + ")");
    if (lambda < 0.0) lambda = mu + 1.0;
    ReducedModel m{lambda, mu, 1.0, y0, a};
    m.validate();
    return {m, JumpMeasure::exponential(mu - 1.0)};
}

}  // namespace nlj
