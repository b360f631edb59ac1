#pragma once

#include <cstdint>

namespace nlj {

// Splittable per-path generator: xoshiro256++ seeded through splitmix64
// from (seed, stream). Every path gets its own stream, so results do not
// depend on thread scheduling. Fully self-contained so output is
// bit-identical across platforms and standard libraries.
class PathRng {
  public:
    PathRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next();

    // Uniform on [0,1), 53-bit resolution.
    double uniform();

    // Uniform on (0,1], safe as a log argument.
    double uniform_pos();

    // Standard normal via Box-Muller; the spare draw is cached.
    double normal();

  private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace nlj
