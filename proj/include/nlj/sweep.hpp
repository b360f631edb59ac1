#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlj/config.hpp"
#include "nlj/csv.hpp"
#include "nlj/fpt.hpp"
#include "nlj/sim.hpp"

namespace nlj {

// Linear grid over one parameter. Every grid point is emitted: valid ones
// as numeric rows, invalid ones flagged, never silently dropped.
struct SweepSpec {
    std::string parameter;  // alpha | nu_e | nu_i | sigma2 | q
    double from = 0.0;
    double to = 0.0;
    int steps = 2;  // number of grid points, endpoints included

    std::vector<double> grid() const;
    void validate() const;
};

struct MonteCarloOptions {
    int paths = 20000;
    double dt = 5e-4;      // ms
    double horizon = 1e4;  // ms
    std::uint64_t seed = 0;
    int threads = 0;
    bool enabled = true;
};

// validate: parameter echo, entrance verdict, regime, and for exponential
// jumps the nu_e bound that restores the entrance condition.
std::string validate_report(const Config& cfg);

// Excitatory-rate bound equivalent to the entrance condition for
// exponential jumps: nu_e > (V_I/(tau(V_E-V_I)) + sigma^2/2 + 1/alpha)/e.
double nu_e_entrance_bound(const PhysiologicalParams& p, double alpha);
// Classical counterpart (no jump term).
double nu_e_entrance_bound_classical(const PhysiologicalParams& p);

// Mean FPT against alpha, analytic series plus Monte Carlo overlay.
// Columns: alpha, mean_analytic_ms, mean_mc_ms, mc_stderr_ms, status.
CsvTable sweep_alpha(const Config& cfg, const SweepSpec& spec,
                     const MonteCarloOptions& mc, const SeriesControl& ctrl = {});

// Laplace transform on a q-grid. Columns: q_per_ms, laplace, branch, status.
CsvTable laplace_table(const Config& cfg, const SweepSpec& q_spec,
                       const SeriesControl& ctrl = {});

// Mean FPT over (nu_e, nu_i). Columns: nu_e_per_ms, nu_i_per_ms,
// mean_fpt_ms, status. model: "nonlocal" or "classical".
CsvTable heatmap(const Config& cfg, const SweepSpec& nu_e_spec,
                 const SweepSpec& nu_i_spec, const std::string& model,
                 const SeriesControl& ctrl = {});

// Firing rates for the non-local and classical models over nu_e, with
// regime labels; regime-transition points appended as extra rows.
CsvTable firing_rate_sweep(const Config& cfg, const SweepSpec& nu_e_spec,
                           const SeriesControl& ctrl = {});

// Mean FPT against sigma^2 for a list of lambda/mu ratios; each ratio is
// realized by adjusting nu_i at fixed nu_e. Rows where the entrance
// condition fails are flagged, matching the curves that stop early.
CsvTable sigma_curves(const Config& cfg, const SweepSpec& sigma2_spec,
                      const std::vector<double>& ratios,
                      const SeriesControl& ctrl = {});

// Regime-transition root in nu_e for the margin of classify_regime;
// affine in nu_e, so two evaluations pin it. with_jumps selects the model.
double regime_transition_nu_e(const Config& cfg, bool with_jumps);

}  // namespace nlj
