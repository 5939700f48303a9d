#ifndef VML_RNG_HPP
#define VML_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace vml {

/// Seeded random source shared by the heuristics and the test generators.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. The conversions to doubles below are written out by hand
/// because the standard distributions are implementation-defined, and every
/// HEURISTIC result must be reproducible from the seed alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    const auto r =
        static_cast<std::uint64_t>(uniform() * static_cast<double>(bound));
    return r < bound ? r : bound - 1;
  }

  bool coin() { return (engine_() >> 63) != 0; }

  /// Standard normal via Box-Muller; the second variate is discarded so the
  /// stream position depends only on the number of calls.
  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace vml

#endif  // VML_RNG_HPP
