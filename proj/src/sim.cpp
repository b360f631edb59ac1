#include "nlj/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace nlj {

namespace {

long step_count(const PathConfig& cfg) {
    return static_cast<long>(std::ceil(cfg.horizon / cfg.dt - 1e-9));
}

int resolve_threads(int requested, int jobs) {
    int t = requested > 0 ? requested
                          : static_cast<int>(std::thread::hardware_concurrency());
    if (t < 1) t = 1;
    return std::min(t, jobs);
}

// Static partition by index: worker w handles [w*chunk, ...); the results
// vector is indexed by path, so the output never depends on thread count.
template <typename Fn>
void parallel_paths(int paths, int threads, Fn per_path) {
    threads = resolve_threads(threads, paths);
    if (threads <= 1) {
        for (int i = 0; i < paths; ++i) per_path(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const int chunk = (paths + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        const int lo = w * chunk;
        const int hi = std::min(paths, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([=] {
            for (int i = lo; i < hi; ++i) per_path(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

void PathConfig::validate(double mass, double y_start) const {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    if (!(dt < horizon)) throw std::invalid_argument("dt must be smaller than horizon");
    if (paths < 1) throw std::invalid_argument("paths must be >= 1");
    // Saturation guard on the per-step jump intensity at the starting state.
    const double floor = std::max(y_start, kYFloor);
    if (mass > 0.0 && !(mass * dt / floor < 50.0))
        throw std::invalid_argument(
            "dt too large: per-step jump intensity m*dt/y saturates at the start state");
}

double milstein_step(const ReducedModel& m, double y, double dw, double dt) {
    const double b = std::sqrt(m.sigma2 * y * (1.0 - y));
    const double drift = (m.mu - m.lambda * y) * dt;
    const double correction = 0.25 * m.sigma2 * (1.0 - 2.0 * y) * (dw * dw - dt);
    return std::clamp(y + drift + b * dw + correction, kYFloor, 1.0);
}

std::optional<std::pair<double, double>> maybe_jump(const JumpMeasure& j, double y,
                                                    double dt, PathRng& rng) {
    const double mass = j.mass();
    if (mass <= 0.0) return std::nullopt;
    const double p = -std::expm1(-mass * dt / y);
    if (rng.uniform() >= p) return std::nullopt;
    const double r = j.sample(rng.uniform());
    const double post = std::max(y * std::exp(-r), kYFloor);
    return std::make_pair(r, post);
}

PathRecord simulate_path(const ReducedModel& m, const JumpMeasure& j,
                         const PathConfig& cfg) {
    m.validate();
    cfg.validate(j.mass(), m.y0);

    const long steps = step_count(cfg);
    PathRecord rec;
    rec.times.reserve(steps + 1);
    rec.values.reserve(steps + 1);
    rec.times.push_back(0.0);
    rec.values.push_back(m.y0);

    PathRng rng(cfg.seed, cfg.stream_offset);
    double y = m.y0;
    for (long i = 1; i <= steps; ++i) {
        const double t = static_cast<double>(i) * cfg.dt;
        if (auto jump = maybe_jump(j, y, cfg.dt, rng)) {
            if (cfg.record_jumps && jump->second < y)
                rec.jump_events.push_back({t, y, jump->second});
            y = jump->second;
        }
        const double dw = rng.normal() * std::sqrt(cfg.dt);
        const double raw = y + (m.mu - m.lambda * y) * cfg.dt +
                           std::sqrt(m.sigma2 * y * (1.0 - y)) * dw +
                           0.25 * m.sigma2 * (1.0 - 2.0 * y) * (dw * dw - cfg.dt);
        y = std::clamp(raw, kYFloor, 1.0);
        if (raw != y) ++rec.clamp_count;
        rec.times.push_back(t);
        rec.values.push_back(y);
    }
    return rec;
}

std::vector<FptSample> sample_fpt(const ReducedModel& m, const JumpMeasure& j,
                                  const PathConfig& cfg) {
    m.validate();
    cfg.validate(j.mass(), m.y0);

    const long steps = step_count(cfg);
    std::vector<FptSample> samples(cfg.paths);

    parallel_paths(cfg.paths, cfg.threads, [&](int path) {
        PathRng rng(cfg.seed, cfg.stream_offset + static_cast<std::uint64_t>(path));
        double y = m.y0;
        if (y >= m.a) {
            samples[path] = {0.0, true};
            return;
        }
        for (long i = 1; i <= steps; ++i) {
            if (auto jump = maybe_jump(j, y, cfg.dt, rng)) y = jump->second;
            const double dw = rng.normal() * std::sqrt(cfg.dt);
            y = milstein_step(m, y, dw, cfg.dt);
            if (y >= m.a) {
                samples[path] = {static_cast<double>(i) * cfg.dt, true};
                return;
            }
        }
        samples[path] = {cfg.horizon, false};
    });
    return samples;
}

FptEstimate summarize_fpt(const std::vector<FptSample>& samples, double horizon) {
    (void)horizon;
    FptEstimate est;
    est.paths = static_cast<int>(samples.size());
    double sum = 0.0;
    for (const auto& s : samples)
        if (s.crossed) {
            ++est.crossed;
            sum += s.hit_time;
        }
    est.censor_rate =
        est.paths > 0 ? 1.0 - static_cast<double>(est.crossed) / est.paths : 0.0;
    est.horizon_warning = est.censor_rate > 0.10;
    if (est.crossed == 0) return est;

    est.mean = sum / est.crossed;
    double ss = 0.0;
    for (const auto& s : samples)
        if (s.crossed) {
            const double d = s.hit_time - est.mean;
            ss += d * d;
        }
    if (est.crossed > 1)
        est.stderr_mean = std::sqrt(ss / (est.crossed - 1.0) / est.crossed);
    return est;
}

FptEstimate estimate_fpt(const ReducedModel& m, const JumpMeasure& j,
                         const PathConfig& cfg) {
    return summarize_fpt(sample_fpt(m, j, cfg), cfg.horizon);
}

std::vector<FptSample> sample_fpt_voltage(const PhysiologicalParams& p,
                                          const PathConfig& cfg,
                                          const JumpMeasure& j) {
    // The affine map to [0,1] preserves hitting times exactly: crossing S
    // in voltage is crossing a = h(S) in the unit interval, so the samples
    // are those of the reduced process, bit for bit.
    return sample_fpt(reduce(p), j, cfg);
}

PathRecord to_voltage(const PathRecord& rec, const PhysiologicalParams& p) {
    PathRecord out;
    out.times = rec.times;
    out.values.reserve(rec.values.size());
    for (double y : rec.values) out.values.push_back(to_voltage_coord(p, y));
    out.jump_events.reserve(rec.jump_events.size());
    for (const auto& ev : rec.jump_events)
        out.jump_events.push_back(
            {ev.time, to_voltage_coord(p, ev.pre), to_voltage_coord(p, ev.post)});
    out.clamp_count = rec.clamp_count;
    return out;
}

StationaryEstimate estimate_stationary(const ReducedModel& m, const JumpMeasure& j,
                                       const PathConfig& cfg) {
    m.validate();
    cfg.validate(j.mass(), m.y0);

    const long steps = step_count(cfg);
    const long burn = steps / 10;

    StationaryEstimate est;
    est.burn_in = static_cast<double>(burn) * cfg.dt;

    PathRng rng(cfg.seed, cfg.stream_offset);
    double y = m.y0;
    double s1 = 0.0, s2 = 0.0;
    for (long i = 1; i <= steps; ++i) {
        if (auto jump = maybe_jump(j, y, cfg.dt, rng)) y = jump->second;
        const double dw = rng.normal() * std::sqrt(cfg.dt);
        const double raw = y + (m.mu - m.lambda * y) * cfg.dt +
                           std::sqrt(m.sigma2 * y * (1.0 - y)) * dw +
                           0.25 * m.sigma2 * (1.0 - 2.0 * y) * (dw * dw - cfg.dt);
        y = std::clamp(raw, kYFloor, 1.0);
        if (raw != y) ++est.clamp_count;
        if (i > burn) {
            s1 += y;
            s2 += y * y;
        }
    }
    const double n = static_cast<double>(steps - burn);
    est.m1 = s1 / n;
    est.m2 = s2 / n;
    return est;
}

}  // namespace nlj
