#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "gdcert/core.hpp"

namespace gdcert {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t splitmix64(std::uint64_t x);

/// 64-bit FNV-1a hash of a role tag.
std::uint64_t fnv1a(std::string_view tag);

/// Derives a child seed from a parent seed and a role tag:
/// splitmix64(seed ^ fnv1a(tag)) for the tag alone, and additionally mixed
/// with the index when one is given. Stable across platforms.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag);
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag,
                          std::uint64_t index);

/// Counter-based random stream. The k-th raw draw is
/// splitmix64(seed + (k + 1) * 0x9E3779B97F4A7C15), so the sequence depends
/// only on (seed, k). Uniforms take the top 53 bits; normals come from the
/// Box-Muller transform applied to pairs of uniforms (cos branch first, sin
/// branch second). Only integer arithmetic and libm log/sqrt/cos/sin are
/// involved, which keeps results reproducible across standard libraries.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();
  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in (0, 1].
  double uniform_open_low();
  double uniform(double lo, double hi);
  double normal();
  double normal(double mean, double stddev);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Uniform point in a ball: Gaussian direction, radius scaled by u^(1/p).
RealVector sample_in_ball(const Ball& ball, CounterRng& rng);

}  // namespace gdcert
