#pragma once

#include <string>

#include "nlj/model.hpp"
#include "nlj/series.hpp"

namespace nlj {

// A first-passage query: start y0, threshold a, Laplace argument q >= 0.
struct FptQuery {
    ReducedModel model;
    JumpMeasure jumps;
    double q = 0.0;  // ms^-1
};

// Exponents of the hypergeometric pair for the Laplace transform:
// kappa*theta = 2q/sigma^2 and kappa + theta + 1 = 2 lambda/sigma^2.
// Real for q <= sigma^2 lambda_bar^2 / 2, conjugate pair beyond.
struct KappaTheta {
    Complex kappa;
    Complex theta;
    double lambda_bar = 0.0;  // lambda/sigma^2 - 1/2
    double branch_q = 0.0;    // sigma^2 lambda_bar^2 / 2
    bool real_branch = true;
};

KappaTheta solve_kappa_theta(const ReducedModel& m, double q);

// E_y[e^{-q T_a}] as a ratio of generalized 2F1 values. Requires
// 0 < y0 < a < 1 and the entrance condition; returns 1 at q = 0.
double laplace_fpt(const FptQuery& fq, const SeriesControl& ctrl = {});

// Aggregate series bookkeeping for provenance output.
struct SeriesStats {
    int terms = 0;
    double truncation_estimate = 0.0;
};

// Mean first passage time (ms) by the general series
// (2/sigma^2) sum_n (2 lambda/sigma^2)_n / (n+1) (a^{n+1}-y^{n+1}) / W_phi(n+2).
double mean_fpt_series(const ReducedModel& m, const JumpMeasure& j,
                       const SeriesControl& ctrl = {}, SeriesStats* stats = nullptr);

// Classical (jump-free) mean,
// (1/mu) sum_n (2 lambda/sigma^2)_n / (2 mu/sigma^2 + 1)_n (a^{n+1}-y^{n+1})/(n+1).
// Requires mu > sigma^2/2.
double mean_fpt_classical(const ReducedModel& m, const SeriesControl& ctrl = {},
                          SeriesStats* stats = nullptr);

// Roots of phi(u) (u+alpha) = (u+k_plus)(u+k_minus) for exponential jumps;
// both positive under the entrance condition.
struct KPair {
    double k_plus = 0.0;
    double k_minus = 0.0;
};

KPair solve_kpair(const ReducedModel& m, double alpha);

// Closed-form mean for exponential jumps, via the 4F3 pair at (a, y0).
// Requires sigma^2/2 < mu - 1/alpha.
double mean_fpt_exponential(const ReducedModel& m, double alpha,
                            const SeriesControl& ctrl = {},
                            SeriesStats* stats = nullptr);

// Classical Laplace transform through the Gauss 2F1 with c = 2 mu/sigma^2.
double classical_laplace(const ReducedModel& m, double q,
                         const SeriesControl& ctrl = {});

// n-th stationary moment W_phi(n+1) / (2 lambda/sigma^2)_n, computed as a
// ratio product so it never overflows.
double stationary_moment(const BernsteinPhi& phi, int n);

// Second central moment of the stationary law.
double stationary_variance(const BernsteinPhi& phi);

enum class Regime { subthreshold, threshold, suprathreshold };

struct RegimeLabel {
    Regime regime = Regime::subthreshold;
    // mu - a*lambda - int e^{-r} Pi_bar(r) dr; threshold within +-1e-12.
    double margin = 0.0;
};

RegimeLabel classify_regime(const ReducedModel& m, const JumpMeasure& j);

const char* regime_name(Regime r);

// Mean comparison under the pointwise hypothesis phi <= phi1. The
// hypothesis is checked on a u-grid on [0, 100]; a violation makes the
// pair incomparable and no ordering is asserted.
struct MeanComparison {
    bool comparable = false;
    double first_violation_u = -1.0;  // < 0 when comparable
    double mean_phi = 0.0;            // the smaller phi (slower process)
    double mean_phi1 = 0.0;           // the larger phi
};

// Both models must share lambda, sigma2, y0 and a.
MeanComparison compare_mean_fpt(const BernsteinPhi& phi, const BernsteinPhi& phi1,
                                const SeriesControl& ctrl = {});

// 1 / mean_fpt_series; throws std::domain_error on the degenerate y0 == a.
double firing_rate(const FptQuery& fq, const SeriesControl& ctrl = {});

}  // namespace nlj
