#pragma once

#include <cmath>
#include <cstdint>

namespace pddcov {

// Splittable pseudo-random generator. Streams are keyed by (seed, stream) so
// each replication owns an independent sequence regardless of how work is
// scheduled across threads; that is what makes benchmark output identical
// for any --threads value.
//
// The core is the splitmix64 mixer; Gaussians come from Box-Muller with a
// fixed two-uniforms-per-pair consumption pattern, so a stream's output is a
// pure function of (seed, stream, draw index).
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream)
      : state_(mix(mix(seed + 0x9e3779b97f4a7c15ull) ^ mix(stream))),
        have_spare_(false),
        spare_(0.0) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // uniform on (0, 1): never returns 0, safe for log()
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  // uniform integer in [0, bound), bound >= 1; rejection keeps it unbiased
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % bound;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  bool have_spare_;
  double spare_;
};

}  // namespace pddcov
