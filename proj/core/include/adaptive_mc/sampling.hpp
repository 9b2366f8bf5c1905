#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include "adaptive_mc/linalg.hpp"

namespace adaptive_mc {

/// SplitMix64 finalizer. Used to expand seeds into generator state and to
/// derive independent per-trial seeds.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed for sub-stream `index` of `seed`; distinct indices give unrelated
/// seeds.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed ^ (0xD1B54A32D192ED03ULL * (index + 1));
  splitmix64(s);
  return splitmix64(s);
}

/// Well-known stream labels so that independent consumers of one seed never
/// share a sequence.
enum class Stream : std::uint64_t {
  kOmega = 0,      // sampling patterns drawn by the completion algorithm
  kBasis = 1,      // generator: ground-truth column space
  kCoefficients = 2,
  kNoise = 3,
  kVerify = 4,
};

/// Identifies a reproducible random sequence.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

/// xoshiro256** seeded from (seed, stream_id) through SplitMix64.
///
/// Every draw is defined in terms of 64-bit integer arithmetic plus, for the
/// normal variates, std::log/std::sqrt, so sequences match across platforms
/// with IEEE-754 doubles. This is deliberately not std::normal_distribution,
/// whose algorithm is implementation defined.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(RngState state);
  Rng(std::uint64_t seed, Stream stream) : Rng(RngState{seed, static_cast<std::uint64_t>(stream)}) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform integer in [0, bound), unbiased (Lemire's multiply-and-reject).
  std::uint64_t uniform_index(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal variate (Marsaglia polar method).
  double standard_normal();

  /// Vector of iid standard normals.
  Vector gaussian_vector(Eigen::Index n);

  /// Matrix of iid standard normals, filled column-major.
  DenseMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols);

  /// Uniformly distributed unit vector in R^n.
  Vector unit_vector(Eigen::Index n);

 private:
  std::array<std::uint64_t, 4> s_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Uniformly random d-subset of {0, ..., m-1} without replacement, sorted.
/// Partial Fisher-Yates over an index array. Requires 1 <= d <= m.
IndexSet sample_uniform_subset(std::size_t m, std::size_t d, Rng& rng);

}  // namespace adaptive_mc
