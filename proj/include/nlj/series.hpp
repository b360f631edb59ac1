#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>

#include "nlj/model.hpp"

namespace nlj {

using Complex = std::complex<double>;

struct SeriesResult {
    Complex value{0.0, 0.0};
    int terms = 0;
    bool converged = false;
    double truncation_estimate = 0.0;  // geometric tail bound on the cut

    double real() const { return value.real(); }
};

// Thrown when a series fails to meet its tolerance within max_terms, or a
// conjugate-pair evaluation leaves an imaginary residue above tolerance.
// Carries the partial sum and the number of terms consumed.
class SeriesError : public std::runtime_error {
  public:
    SeriesError(const std::string& what, Complex partial, int terms)
        : std::runtime_error(what), partial(partial), terms(terms) {}

    Complex partial;
    int terms;
};

namespace detail {

// Compensated complex accumulator (Kahan, per component).
struct Accumulator {
    double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0;

    void add(Complex t) {
        double y = t.real() - cr;
        double s = sr + y;
        cr = (s - sr) - y;
        sr = s;
        y = t.imag() - ci;
        s = si + y;
        ci = (s - si) - y;
        si = s;
    }

    Complex sum() const { return {sr, si}; }
};

// Sums t_0 + t_1 + ... with t_{n+1} = t_n * ratio(n). Adaptive mode stops
// once `streak` consecutive upcoming terms have geometric tail bounds below
// rel_tol * |partial sum|; fixed mode sums exactly fixed_terms terms.
template <typename RatioFn>
SeriesResult sum_ratio_series(Complex t0, RatioFn ratio, double z,
                              const SeriesControl& ctrl, const char* what) {
    ctrl.validate();
    const double zq = std::min(std::fabs(z), 0.999);
    const double tail_scale = 1.0 - zq;

    Accumulator acc;
    SeriesResult res;
    Complex t = t0;

    if (ctrl.fixed_terms > 0) {
        for (int n = 0; n < ctrl.fixed_terms; ++n) {
            acc.add(t);
            t *= ratio(n);
        }
        res.value = acc.sum();
        res.terms = ctrl.fixed_terms;
        res.truncation_estimate = std::abs(t) / tail_scale;
        res.converged = res.truncation_estimate <= ctrl.rel_tol * std::abs(res.value);
        return res;
    }

    int small_streak = 0;
    for (int n = 0; n < ctrl.max_terms; ++n) {
        acc.add(t);
        const Complex t_next = t * ratio(n);
        if (std::abs(t_next) <= ctrl.rel_tol * tail_scale * std::abs(acc.sum())) {
            if (++small_streak >= ctrl.streak) {
                res.value = acc.sum();
                res.terms = n + 1;
                res.truncation_estimate = std::abs(t_next) / tail_scale;
                res.converged = true;
                return res;
            }
        } else {
            small_streak = 0;
        }
        t = t_next;
    }
    throw SeriesError(std::string(what) + " did not converge within " +
                          std::to_string(ctrl.max_terms) + " terms",
                      acc.sum(), ctrl.max_terms);
}

}  // namespace detail

// (a)_n = a (a+1) ... (a+n-1) by running product; (a)_0 = 1.
Complex pochhammer(Complex a, int n);

// Generalized Gauss series sum_n (a)_n (b)_n / n! * z^n / W_phi(n+1).
// Reduces to 2F1(a, b; phi(0)+1; z) when the jump measure vanishes.
// Requires |z| <= 0.999; analytic continuation toward z = 1 is out of
// scope. When b == conj(a) the value is real; the imaginary residue is
// checked against ctrl.rel_tol and discarded.
SeriesResult hyp2f1_phi(Complex a, Complex b, const BernsteinPhi& phi, double z,
                        const SeriesControl& ctrl = {});

// Classical Gauss 2F1(a, b; c; z) by direct series; c must not be a
// nonpositive integer.
SeriesResult gauss_2f1(Complex a, Complex b, double c, double z,
                       const SeriesControl& ctrl = {});

// Generic pFq with real parameters: sum prod (num_i)_n / prod (den_j)_n
// * z^n / n!.
SeriesResult hyp_pfq(std::span<const double> num, std::span<const double> den,
                     double z, const SeriesControl& ctrl = {});

// d/da of the generalized 2F1 at a = 0:
// b * sum_n (b+1)_n / (n+1) * z^{n+1} / W_phi(n+2).
SeriesResult d2f1_da_at_zero(double b, const BernsteinPhi& phi, double z,
                             const SeriesControl& ctrl = {});

// Companion identity: d/db of the generalized 2F1 vanishes at a = 0.
constexpr double d2f1_db_at_zero() { return 0.0; }

}  // namespace nlj
