#pragma once

#include <cstdint>
#include <random>

namespace afc {

// Seedable generator with hand-rolled distribution transforms so that a
// (seed, config) pair yields the same stream on every platform; std::
// distributions are implementation-defined and would break that contract.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Standard normal, Box-Muller pair with one value cached.
  double normal();

  // Unit-rate exponential.
  double exponential();

  // Gamma(shape, rate 1), Marsaglia-Tsang.
  double gamma(double shape);

  double chi_square(double v) { return 2.0 * gamma(0.5 * v); }

  // Well-mixed child seed for parallel streams (splitmix64 finalizer).
  static std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace afc
