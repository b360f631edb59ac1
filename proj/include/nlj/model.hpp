#pragma once

#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlj {

// Membrane-level inputs. Voltages in mV, times in ms, rates in ms^-1.
struct PhysiologicalParams {
    double v_inh;       // inhibitory reversal potential V_I (mV, < 0)
    double v_exc;       // excitatory reversal potential V_E (mV, > 0)
    double tau;         // membrane time constant (ms, > 0)
    double nu_e;        // excitatory input rate (ms^-1, > 0)
    double nu_i;        // inhibitory input rate (ms^-1, > 0)
    double e_amp;       // excitatory synaptic strength, in (0,1)
    double i_amp;       // inhibitory synaptic strength, in (-1,0)
    double sigma2;      // noise intensity (ms^-1, > 0)
    double threshold;   // firing threshold S (mV), V_I < S < V_E
    double reset;       // reset/start voltage x0 (mV), V_I <= x0 < S

    // Throws std::invalid_argument naming the violated bound.
    void validate() const;

    double mu_e() const { return e_amp * nu_e; }
    double mu_i() const { return i_amp * nu_i; }
};

// Unit-interval model. All rates in ms^-1; y and a dimensionless.
struct ReducedModel {
    double lambda;  // mean-reversion rate, > mu
    double mu;      // upward drift rate
    double sigma2;  // noise intensity
    double y0;      // start, in [0,1)
    double a;       // threshold, in (0,1], y0 < a

    void validate() const;
};

// Affine map [0,1] -> [V_I, V_E] and its inverse.
double to_voltage_coord(const PhysiologicalParams& p, double y);
double to_unit_coord(const PhysiologicalParams& p, double x);

// lambda = 1/tau + mu_e - mu_i, mu = mu_e - V_I/(tau (V_E - V_I)),
// y0 and a are the unit-interval images of reset and threshold.
ReducedModel reduce(const PhysiologicalParams& p);

// Downward-jump measure Pi on r > 0. Finite mass m = Pi(R+) and finite
// first moment hbar = int r Pi(dr). A jump multiplies the state by e^{-r}.
class JumpMeasure {
  public:
    enum class Kind { none, exponential, tabulated };

    static JumpMeasure none();
    // Pi(dr) = alpha e^{-alpha r} dr, alpha >= 1. Mass 1, tail e^{-alpha r},
    // hbar = 1/alpha.
    static JumpMeasure exponential(double alpha);
    // Density sampled on a strictly increasing grid of r > 0; zero outside.
    // Mass, hbar and all integrals are trapezoid-rule values on the grid.
    static JumpMeasure tabulated(std::vector<double> r, std::vector<double> density);

    Kind kind() const { return kind_; }
    double alpha() const;

    double mass() const { return mass_; }
    double hbar() const { return hbar_; }

    // Tail Pi_bar(r) = Pi((r, inf)).
    double tail(double r) const;

    // int_0^inf (1 - e^{-u r}) Pi_bar(r) dr; the jump part of phi.
    double jump_integral(double u) const;

    // int_0^inf e^{-r} Pi_bar(r) dr; enters the stationary mean and the
    // regime margin.
    double exp_tail_moment() const;

    // Inverse-CDF draw from the normalized measure Pi/m, unif in [0,1).
    // Exponential: -ln(1-unif)/alpha. Tabulated: exact inversion of the
    // piecewise-linear density.
    double sample(double unif) const;

    const std::vector<double>& grid_r() const { return r_; }
    const std::vector<double>& grid_density() const { return p_; }

  private:
    JumpMeasure() = default;

    Kind kind_ = Kind::none;
    double alpha_ = 0.0;
    double mass_ = 0.0;
    double hbar_ = 0.0;
    std::vector<double> r_;     // tabulated grid
    std::vector<double> p_;     // density at grid nodes
    std::vector<double> tail_;  // Pi_bar at grid nodes
    std::vector<double> cdf_;   // unnormalized CDF at grid nodes
};

struct EntranceReport {
    bool ok = false;
    double mu = 0.0;
    double hbar = 0.0;
    double half_sigma2 = 0.0;
    double phi0 = 0.0;          // (2/sigma^2)(mu - hbar - sigma^2/2)
    bool borderline = false;    // 0 < phi0 < 1e-12: W_phi underflows slowly
    std::string message;
};

// The lower boundary is entrance iff mu > hbar + sigma^2/2, i.e. phi(0) > 0.
// Strict inequality, no epsilon margin.
EntranceReport entrance_check(const ReducedModel& m, const JumpMeasure& j);

// Truncation policy for all series evaluations.
struct SeriesControl {
    double rel_tol = 1e-12;  // per-term relative threshold
    int streak = 3;          // consecutive small terms required to stop
    int max_terms = 100000;
    int fixed_terms = 0;     // > 0: sum exactly this many terms instead

    void validate() const;
};

// Bernstein function phi(u) = u + (2/sigma^2)(mu - hbar - sigma^2/2
// + int (1-e^{-ur}) Pi_bar(r) dr) together with the product
// W_phi(n+1) = prod_{k=1..n} phi(k). Construction fails unless the
// entrance condition holds, since phi(0) > 0 is what keeps W_phi positive.
//
// Integer evaluations of phi and the W_phi products are cached; the cache
// grows under a lock and is safe to extend from concurrent readers.
class BernsteinPhi {
  public:
    BernsteinPhi(ReducedModel m, JumpMeasure j);

    double operator()(double u) const { return phi(u); }
    double phi(double u) const;
    double phi0() const { return phi0_; }

    // phi(k) for integer k >= 1, cached.
    double phi_int(int k) const;

    // W_phi(n), n >= 1. Throws std::range_error once the product exceeds
    // the double range; log_wphi keeps working there.
    double wphi(int n) const;
    double log_wphi(int n) const;

    const ReducedModel& model() const { return model_; }
    const JumpMeasure& jumps() const { return jumps_; }

  private:
    void extend(int k) const;  // caller holds lock

    ReducedModel model_;
    JumpMeasure jumps_;
    double phi0_ = 0.0;

    mutable std::mutex lock_;
    mutable std::vector<double> phi_k_;    // phi(1), phi(2), ...
    mutable std::vector<double> w_;        // w_[n-1] = W_phi(n), inf on overflow
    mutable std::vector<double> logw_;     // logw_[n-1] = log W_phi(n)
};

// The 4.1.1 special case: sigma^2 = 1 and exponential jumps with
// alpha = mu - 1, so that phi(u) = (u+mu)(u+mu-2)/(u+mu-1). Requires
// mu > 2. lambda, y0 and a are free; defaults keep lambda > mu.
std::pair<ReducedModel, JumpMeasure> special_preset(double mu,
                                                    double lambda = -1.0,
                                                    double y0 = 0.09,
                                                    double a = 0.18);

}  // namespace nlj
