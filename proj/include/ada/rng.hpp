#pragma once

#include <cmath>
#include <cstdint>

namespace ada {

// Counter-based pseudo-random source. Every draw is a pure function of the
// key and an internal draw counter, so a stream can be reconstructed from
// (seed, fork path) alone. Simulation code forks one stream per
// (tick, object) pair, which keeps scenario output independent of scheduling
// and execution order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(mix(seed ^ kGolden)) {}

  // Derives an independent substream. fork(a).fork(b) != fork(b).fork(a).
  [[nodiscard]] Rng fork(std::uint64_t stream) const {
    return Rng(mix(key_ + kGolden * (stream + 1)));
  }

  std::uint64_t next_bits() { return mix(key_ + kGolden * ++counter_); }

  // Uniform in the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(next_bits() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Symmetric uniform in (-amplitude, amplitude).
  double jitter(double amplitude) { return uniform(-amplitude, amplitude); }

  // Standard normal via Box-Muller.
  double gaussian() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  static std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
  }

  // Stable scalar key for deriving per-index seeds (campaign scenarios).
  static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix(master + kGolden * (index + 1));
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace ada
