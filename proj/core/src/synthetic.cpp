#include "adaptive_mc/synthetic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace adaptive_mc {

std::string to_string(const CoherenceMode& mode) {
  if (const auto* spiked = std::get_if<Spiked>(&mode)) {
    return "spiked(" + std::to_string(spiked->index) + "," +
           std::to_string(spiked->weight) + ")";
  }
  return "incoherent";
}

std::string to_string(NoiseMode mode) {
  switch (mode) {
    case NoiseMode::kSphere: return "sphere";
    case NoiseMode::kScaledGaussian: return "scaled-gaussian";
  }
  return "unknown";
}

NoiseMode parse_noise_mode(const std::string& text) {
  if (text == "sphere") return NoiseMode::kSphere;
  if (text == "scaled-gaussian") return NoiseMode::kScaledGaussian;
  throw std::invalid_argument("unknown noise mode '" + text +
                              "' (expected sphere or scaled-gaussian)");
}

namespace {

constexpr double kLeadingBlockMinSigma = 0.1;
constexpr int kMaxResamples = 10000;

OrthonormalBasis draw_basis(std::size_t m, std::size_t r, const CoherenceMode& mode,
                            Rng& rng) {
  const auto rows = static_cast<Eigen::Index>(m);
  const auto cols = static_cast<Eigen::Index>(r);
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    DenseMatrix raw = rng.gaussian_matrix(rows, cols);
    if (const auto* spiked = std::get_if<Spiked>(&mode)) {
      Vector spike = (1.0 - spiked->weight) * rng.unit_vector(rows);
      spike(static_cast<Eigen::Index>(spiked->index)) += spiked->weight;
      raw.col(0) = spike;
    }
    OrthonormalBasis basis = orthonormalize_columns(raw);
    if (basis.dim() == r) return basis;
  }
  throw std::runtime_error("generate_low_rank: could not draw a full-rank basis");
}

// Unit-norm Gaussian direction in R^r, resampled if degenerate.
Vector draw_unit_coefficients(Eigen::Index r, Rng& rng) {
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    Vector c = rng.gaussian_vector(r);
    const double norm = c.norm();
    if (norm > 1e-12) return c / norm;
  }
  throw std::runtime_error("generate_low_rank: degenerate coefficient column");
}

}  // namespace

LowRankFactors generate_low_rank(std::size_t m, std::size_t n, std::size_t r,
                                 const CoherenceMode& mode, std::uint64_t seed) {
  if (r < 1 || r > m || r > n) {
    throw std::invalid_argument("rank r must satisfy 1 <= r <= min(m, n)");
  }
  if (const auto* spiked = std::get_if<Spiked>(&mode)) {
    if (spiked->index >= m) throw std::invalid_argument("spike index must be < m");
    if (!(spiked->weight >= 0.0 && spiked->weight <= 1.0)) {
      throw std::invalid_argument("spike weight must lie in [0, 1]");
    }
  }
  Rng basis_rng(seed, Stream::kBasis);
  Rng coeff_rng(seed, Stream::kCoefficients);

  OrthonormalBasis basis = draw_basis(m, r, mode, basis_rng);

  const auto rk = static_cast<Eigen::Index>(r);
  const auto nk = static_cast<Eigen::Index>(n);
  DenseMatrix c(rk, nk);
  int attempt = 0;
  do {
    if (++attempt > kMaxResamples) {
      throw std::runtime_error("generate_low_rank: leading block stays ill-conditioned");
    }
    for (Eigen::Index j = 0; j < rk; ++j) c.col(j) = draw_unit_coefficients(rk, coeff_rng);
  } while (singular_values(c.leftCols(rk))(rk - 1) < kLeadingBlockMinSigma);
  for (Eigen::Index j = rk; j < nk; ++j) c.col(j) = draw_unit_coefficients(rk, coeff_rng);

  DenseMatrix l = basis.columns() * c;
  for (Eigen::Index j = 0; j < nk; ++j) {
    const double norm = l.col(j).norm();
    l.col(j) /= norm;
    c.col(j) /= norm;
  }
  return LowRankFactors{std::move(l), std::move(basis), std::move(c)};
}

void require_valid_epsilon(double epsilon) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
  if (!(epsilon < kEpsilonLimit)) {
    throw std::invalid_argument("epsilon must be < 0.25 (bounded-noise model requires eps < 1/4)");
  }
}

ProblemInstance add_bounded_noise(const LowRankFactors& factors, double epsilon,
                                  NoiseMode mode, std::uint64_t seed) {
  require_valid_epsilon(epsilon);
  const DenseMatrix& l = factors.L;
  DenseMatrix zeta = DenseMatrix::Zero(l.rows(), l.cols());
  if (epsilon > 0.0) {
    Rng rng(seed, Stream::kNoise);
    for (Eigen::Index j = 0; j < l.cols(); ++j) {
      const double radius =
          mode == NoiseMode::kSphere ? epsilon : epsilon * rng.uniform01();
      zeta.col(j) = radius * rng.unit_vector(l.rows());
    }
  }
  for (Eigen::Index j = 0; j < zeta.cols(); ++j) {
    if (zeta.col(j).norm() > epsilon + 1e-12) {
      throw std::logic_error("noise column exceeds the epsilon bound");
    }
  }
  ProblemInstance inst;
  inst.L = l;
  inst.M = l + zeta;
  inst.zeta = std::move(zeta);
  inst.true_basis = factors.basis;
  inst.epsilon = epsilon;
  inst.r = factors.basis.dim();
  return inst;
}

ProblemInstance generate_instance(std::size_t m, std::size_t n, std::size_t r,
                                  double epsilon, const CoherenceMode& coherence_mode,
                                  NoiseMode noise_mode, std::uint64_t seed) {
  require_valid_epsilon(epsilon);
  return add_bounded_noise(generate_low_rank(m, n, r, coherence_mode, seed), epsilon,
                           noise_mode, seed);
}

// ---------------------------------------------------------------------------
// ObservationOracle

ObservationOracle::ObservationOracle(DenseMatrix hidden)
    : ObservationOracle(std::make_shared<const DenseMatrix>(std::move(hidden))) {}

ObservationOracle::ObservationOracle(std::shared_ptr<const DenseMatrix> hidden)
    : hidden_(std::move(hidden)) {
  if (!hidden_) throw std::invalid_argument("oracle needs a matrix");
  revealed_.assign(static_cast<std::size_t>(hidden_->size()), 0);
  revealed_per_column_.assign(cols(), 0);
}

void ObservationOracle::check_column(std::size_t j) const {
  if (j >= cols()) {
    throw std::out_of_range("column " + std::to_string(j) + " out of range (n = " +
                            std::to_string(cols()) + ")");
  }
}

void ObservationOracle::mark(std::size_t i, std::size_t j) {
  auto& flag = revealed_[j * rows() + i];
  if (flag == 0) {
    flag = 1;
    ++entry_count_;
    ++revealed_per_column_[j];
  }
}

double ObservationOracle::entry(std::size_t i, std::size_t j) {
  check_column(j);
  if (i >= rows()) throw std::out_of_range("row " + std::to_string(i) + " out of range");
  {
    std::lock_guard lock(mutex_);
    mark(i, j);
  }
  return (*hidden_)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

Vector ObservationOracle::column(std::size_t j) {
  check_column(j);
  {
    std::lock_guard lock(mutex_);
    for (std::size_t i = 0; i < rows(); ++i) mark(i, j);
  }
  return hidden_->col(static_cast<Eigen::Index>(j));
}

Vector ObservationOracle::entries(const IndexSet& omega, std::size_t j) {
  check_column(j);
  if (omega.ambient() != rows()) {
    throw DimensionError("index set ambient does not match oracle row count");
  }
  {
    std::lock_guard lock(mutex_);
    for (const std::size_t i : omega) mark(i, j);
  }
  Vector out(static_cast<Eigen::Index>(omega.size()));
  const auto col = hidden_->col(static_cast<Eigen::Index>(j));
  for (std::size_t t = 0; t < omega.size(); ++t) {
    out(static_cast<Eigen::Index>(t)) = col(static_cast<Eigen::Index>(omega[t]));
  }
  return out;
}

std::size_t ObservationOracle::entry_count() const {
  std::lock_guard lock(mutex_);
  return entry_count_;
}

bool ObservationOracle::column_fully_observed(std::size_t j) const {
  check_column(j);
  std::lock_guard lock(mutex_);
  return revealed_per_column_[j] == rows();
}

bool ObservationOracle::revealed(std::size_t i, std::size_t j) const {
  check_column(j);
  if (i >= rows()) throw std::out_of_range("row out of range");
  std::lock_guard lock(mutex_);
  return revealed_[j * rows() + i] != 0;
}

}  // namespace adaptive_mc
