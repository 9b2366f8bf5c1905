#pragma once

// Ground-truth generation for the bounded-noise model M = L + zeta, where L
// has rank r with unit-norm columns and every noise column has norm <= eps,
// plus the observation oracle through which the completion algorithm reads M.

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

#include "adaptive_mc/linalg.hpp"
#include "adaptive_mc/sampling.hpp"

namespace adaptive_mc {

struct Incoherent {};

/// First basis direction blended toward e_index with the given weight in
/// [0, 1]; weight near 1 pushes coherence toward its maximum m/r.
struct Spiked {
  std::size_t index = 0;
  double weight = 0.0;
};

using CoherenceMode = std::variant<Incoherent, Spiked>;

std::string to_string(const CoherenceMode& mode);

enum class NoiseMode {
  kSphere,          // ||zeta_i|| = eps exactly
  kScaledGaussian,  // Gaussian direction, radius uniform on [0, eps]
};

std::string to_string(NoiseMode mode);
NoiseMode parse_noise_mode(const std::string& text);

/// The model requires eps < 1/4.
inline constexpr double kEpsilonLimit = 0.25;

struct LowRankFactors {
  DenseMatrix L;               // m x n, rank r, unit columns
  OrthonormalBasis basis;      // column space of L
  DenseMatrix coefficients;    // r x n, L = basis * coefficients
};

/// L = B C with B an m x r orthonormal basis and C an r x n coefficient
/// matrix whose columns are unit vectors. The leading r x r block of C is
/// resampled until its smallest singular value is >= 0.1 so that the first r
/// columns already span the whole column space.
LowRankFactors generate_low_rank(std::size_t m, std::size_t n, std::size_t r,
                                 const CoherenceMode& mode, std::uint64_t seed);

struct ProblemInstance {
  DenseMatrix L;
  DenseMatrix zeta;
  DenseMatrix M;
  OrthonormalBasis true_basis;
  double epsilon = 0.0;
  std::size_t r = 0;
};

/// Adds one noise column of norm <= epsilon to each column of L.
/// Throws std::invalid_argument unless 0 <= epsilon < 1/4.
ProblemInstance add_bounded_noise(const LowRankFactors& factors, double epsilon,
                                  NoiseMode mode, std::uint64_t seed);

/// Validates the noise level against the model precondition.
void require_valid_epsilon(double epsilon);

/// generate_low_rank followed by add_bounded_noise with one seed.
ProblemInstance generate_instance(std::size_t m, std::size_t n, std::size_t r,
                                  double epsilon, const CoherenceMode& coherence_mode,
                                  NoiseMode noise_mode, std::uint64_t seed);

/// Reveals entries of a hidden matrix and counts each entry once, on first
/// reveal. Reads of distinct columns may run concurrently.
class ObservationOracle {
 public:
  explicit ObservationOracle(DenseMatrix hidden);
  explicit ObservationOracle(std::shared_ptr<const DenseMatrix> hidden);

  ObservationOracle(const ObservationOracle&) = delete;
  ObservationOracle& operator=(const ObservationOracle&) = delete;

  std::size_t rows() const { return static_cast<std::size_t>(hidden_->rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(hidden_->cols()); }

  double entry(std::size_t i, std::size_t j);
  Vector column(std::size_t j);
  Vector entries(const IndexSet& omega, std::size_t j);

  std::size_t entry_count() const;
  bool column_fully_observed(std::size_t j) const;
  bool revealed(std::size_t i, std::size_t j) const;

 private:
  void check_column(std::size_t j) const;
  // Marks (i, j) revealed; caller holds mutex_.
  void mark(std::size_t i, std::size_t j);

  std::shared_ptr<const DenseMatrix> hidden_;
  mutable std::mutex mutex_;
  std::vector<std::uint8_t> revealed_;  // column-major m x n
  std::vector<std::size_t> revealed_per_column_;
  std::size_t entry_count_ = 0;
};

}  // namespace adaptive_mc
