#pragma once

#include <cstdint>
#include <cmath>

namespace leotrack {

// Deterministic, platform-independent random streams.
//
// std::normal_distribution is not required to produce identical sequences
// across standard libraries, so reproducible scenario outputs need their own
// generator: splitmix64 for uniforms, Box-Muller for Gaussians. Independent
// streams are derived from (seed, stream tag, run index) so Monte Carlo
// replicates never share draws and run k is the same whether or not other
// runs execute.
class Rng {
 public:
  enum Stream : std::uint64_t {
    kInitialBelief = 1,
    kProcessNoise = 2,
    kMeasurementNoise = 3,
  };

  static Rng stream(std::uint64_t seed, Stream tag, std::uint64_t run) {
    std::uint64_t s = seed;
    s = mix(s ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(tag) + 1)));
    s = mix(s ^ (0xD1B54A32D192ED03ULL * (run + 1)));
    return Rng(s);
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform on (0, 1]; never 0 so log() below is safe.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  explicit Rng(std::uint64_t state) : state_(state) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace leotrack
