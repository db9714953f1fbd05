#pragma once

#include <cstdint>
#include <random>

namespace ddlab {

// Stream-splitting rule: every consumer of randomness derives its own
// mt19937_64 from (user seed, stream tag) through splitmix64, so datasets,
// test sets, and the optimizer never share draws and each is reproducible
// bit-for-bit from the user seed alone.
namespace streams {
inline constexpr std::uint64_t kTeacher = 1;  // the direction eta
inline constexpr std::uint64_t kLabels = 2;   // training labels
inline constexpr std::uint64_t kNoise = 3;    // training noise rows
inline constexpr std::uint64_t kTest = 4;     // fresh test samples
inline constexpr std::uint64_t kOptimizer = 5;
}  // namespace streams

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(~stream));
}

/// Deterministic Gaussian source: mt19937_64 (sequence fixed by the
/// standard) + explicit Box-Muller, avoiding the implementation-defined
/// std::normal_distribution.
class GaussianStream {
public:
  explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on (0, 1].
  double uniform_open() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ddlab
