#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "nlj/model.hpp"
#include "nlj/rng.hpp"

namespace nlj {

// States are clamped to [kYFloor, 1]; the jump rate m/y diverges at 0, so
// the floor bounds the per-step jump probability.
inline constexpr double kYFloor = 1e-12;

struct PathConfig {
    double dt = 5e-4;        // ms
    double horizon = 100.0;  // ms
    std::uint64_t seed = 0;
    int paths = 1;
    bool record_jumps = false;
    int threads = 0;                 // 0: use hardware concurrency
    std::uint64_t stream_offset = 0; // path i draws from stream offset + i

    void validate(double mass, double y_start) const;
};

struct JumpEvent {
    double time;  // ms
    double pre;   // state before the jump
    double post;  // e^{-r} * pre
};

struct PathRecord {
    std::vector<double> times;   // ms, increasing
    std::vector<double> values;  // states in [kYFloor, 1]
    std::vector<JumpEvent> jump_events;
    long clamp_count = 0;  // boundary clamps, diagnostic
};

struct FptSample {
    double hit_time;  // ms; horizon when censored
    bool crossed;
};

struct FptEstimate {
    double mean = 0.0;         // ms, over crossed paths
    double stderr_mean = 0.0;  // ms
    double censor_rate = 0.0;
    int paths = 0;
    int crossed = 0;
    bool horizon_warning = false;  // censor_rate > 10%
};

// One Milstein update of dY = (mu - lambda y) dt + sigma sqrt(y(1-y)) dW,
// clamped to [kYFloor, 1].
double milstein_step(const ReducedModel& m, double y, double dw, double dt);

// Jump thinning for one step: with probability 1 - e^{-m dt / y} draws r
// from the normalized measure and moves to e^{-r} y. Returns (r, new_state).
std::optional<std::pair<double, double>> maybe_jump(const JumpMeasure& j, double y,
                                                    double dt, PathRng& rng);

// One path up to the horizon: jump test first, then the diffusion step.
PathRecord simulate_path(const ReducedModel& m, const JumpMeasure& j,
                         const PathConfig& cfg);

// Per-path first passage through m.a, stopped at the first grid point with
// state >= a (no bridge correction; the scheme overestimates the mean).
// Sample order is by path index regardless of thread count.
std::vector<FptSample> sample_fpt(const ReducedModel& m, const JumpMeasure& j,
                                  const PathConfig& cfg);

FptEstimate summarize_fpt(const std::vector<FptSample>& samples, double horizon);

FptEstimate estimate_fpt(const ReducedModel& m, const JumpMeasure& j,
                         const PathConfig& cfg);

// Voltage-level first passage through p.threshold: reduces to the unit
// interval and simulates there, so the hit times are exactly those of the
// reduced process (the affine map preserves hitting times).
std::vector<FptSample> sample_fpt_voltage(const PhysiologicalParams& p,
                                          const PathConfig& cfg,
                                          const JumpMeasure& j);

// Pointwise affine map of a recorded path to voltage coordinates (mV).
PathRecord to_voltage(const PathRecord& rec, const PhysiologicalParams& p);

struct StationaryEstimate {
    double m1 = 0.0;  // time average of y
    double m2 = 0.0;  // time average of y^2
    double burn_in = 0.0;  // ms discarded
    long clamp_count = 0;
};

// Long-run time averages over one path; the first 10% of the horizon is
// discarded as burn-in.
StationaryEstimate estimate_stationary(const ReducedModel& m, const JumpMeasure& j,
                                       const PathConfig& cfg);

}  // namespace nlj
