#pragma once

#include <cstdint>

namespace fairpot {

/// xoshiro256** seeded through splitmix64.
///
/// Independent streams are derived from one seed by mixing a stream id into
/// the splitmix64 seed, so each generation stage draws from its own sequence
/// regardless of how many numbers other stages consume.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();

  /// Uniform on the open interval (0, 1) with 53 bits of resolution.
  double uniform();
  /// Standard normal by inversion of the uniform draw.
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t s_[4];
};

// Stream ids used by the synthetic pipeline.
namespace stream {
inline constexpr std::uint64_t kFeaturesA = 1;
inline constexpr std::uint64_t kFeaturesB = 2;
inline constexpr std::uint64_t kCoefficients = 3;
inline constexpr std::uint64_t kLabels = 4;
inline constexpr std::uint64_t kSplit = 5;
inline constexpr std::uint64_t kBootstrap = 6;
}  // namespace stream

}  // namespace fairpot
