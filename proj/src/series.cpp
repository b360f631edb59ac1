#include "nlj/series.hpp"

#include <cmath>
#include <cstdio>

namespace nlj {

namespace {

constexpr double kMaxZ = 0.999;  // hard refusal; no analytic continuation

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void require_disc(double z) {
    if (!(std::fabs(z) <= kMaxZ))
        throw std::domain_error("series argument z = " + num(z) +
                                " outside the supported disc |z| <= " + num(kMaxZ));
}

bool nonpositive_integer(double c) {
    return c <= 0.0 && std::floor(c) == c;
}

// For a conjugate parameter pair the value is real; verify the residue and
// strip it. A residue above tolerance means the summation itself is off.
SeriesResult realize_conjugate(SeriesResult res, Complex a, Complex b,
                               const SeriesControl& ctrl, const char* what) {
    if (a.imag() == 0.0 && b.imag() == 0.0) return res;
    if (b == std::conj(a)) {
        const double mag = std::abs(res.value);
        if (mag > 0.0 && std::fabs(res.value.imag()) > ctrl.rel_tol * mag)
            throw SeriesError(std::string(what) + ": imaginary residue " +
                                  num(res.value.imag()) + " exceeds tolerance at |value| " +
                                  num(mag),
                              res.value, res.terms);
        res.value = Complex(res.value.real(), 0.0);
    }
    return res;
}

}  // namespace

Complex pochhammer(Complex a, int n) {
    if (n < 0) throw std::domain_error("pochhammer requires n >= 0");
    Complex prod(1.0, 0.0);
    for (int k = 0; k < n; ++k) prod *= a + static_cast<double>(k);
    return prod;
}

SeriesResult hyp2f1_phi(Complex a, Complex b, const BernsteinPhi& phi, double z,
                        const SeriesControl& ctrl) {
    require_disc(z);
    auto ratio = [&](int n) {
        return (a + static_cast<double>(n)) * (b + static_cast<double>(n)) * z /
               ((n + 1.0) * phi.phi_int(n + 1));
    };
    SeriesResult res =
        detail::sum_ratio_series(Complex(1.0, 0.0), ratio, z, ctrl, "2F1(a,b;phi;z)");
    return realize_conjugate(res, a, b, ctrl, "2F1(a,b;phi;z)");
}

SeriesResult gauss_2f1(Complex a, Complex b, double c, double z,
                       const SeriesControl& ctrl) {
    require_disc(z);
    if (nonpositive_integer(c))
        throw std::domain_error("2F1 parameter c = " + num(c) +
                                " is a nonpositive integer");
    auto ratio = [&](int n) {
        return (a + static_cast<double>(n)) * (b + static_cast<double>(n)) * z /
               ((c + n) * (n + 1.0));
    };
    SeriesResult res =
        detail::sum_ratio_series(Complex(1.0, 0.0), ratio, z, ctrl, "2F1(a,b;c;z)");
    return realize_conjugate(res, a, b, ctrl, "2F1(a,b;c;z)");
}

SeriesResult hyp_pfq(std::span<const double> num_params, std::span<const double> den_params,
                     double z, const SeriesControl& ctrl) {
    require_disc(z);
    for (double d : den_params)
        if (nonpositive_integer(d))
            throw std::domain_error("pFq denominator parameter " + num(d) +
                                    " is a nonpositive integer");
    auto ratio = [&](int n) {
        double r = z / (n + 1.0);
        for (double p : num_params) r *= p + n;
        for (double q : den_params) r /= q + n;
        return Complex(r, 0.0);
    };
    return detail::sum_ratio_series(Complex(1.0, 0.0), ratio, z, ctrl, "pFq");
}

SeriesResult d2f1_da_at_zero(double b, const BernsteinPhi& phi, double z,
                             const SeriesControl& ctrl) {
    require_disc(z);
    // b * sum_n (b+1)_n/(n+1) z^{n+1} / W_phi(n+2); term 0 is z/phi(1).
    auto ratio = [&](int n) {
        return Complex((b + 1.0 + n) * (n + 1.0) * z / ((n + 2.0) * phi.phi_int(n + 2)),
                       0.0);
    };
    SeriesResult res = detail::sum_ratio_series(Complex(z / phi.phi_int(1), 0.0), ratio,
                                                z, ctrl, "d/da 2F1 at a=0");
    res.value *= b;
    res.truncation_estimate *= std::fabs(b);
    return res;
}

}  // namespace nlj
