#include "adaptive_mc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>

namespace adaptive_mc {

void require_finite(const DenseMatrix& a, const char* what) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw std::invalid_argument(std::string(what) + ": matrix must be at least 1x1");
  }
  if (!a.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": matrix has non-finite entries");
  }
}

// ---------------------------------------------------------------------------
// OrthonormalBasis

OrthonormalBasis::OrthonormalBasis(std::size_t ambient_dim)
    : ambient_dim_(ambient_dim), columns_(static_cast<Eigen::Index>(ambient_dim), 0) {}

OrthonormalBasis::OrthonormalBasis(std::size_t ambient_dim, DenseMatrix columns)
    : ambient_dim_(ambient_dim), columns_(std::move(columns)) {}

OrthonormalBasis OrthonormalBasis::from_columns(DenseMatrix columns) {
  if (columns.cols() > columns.rows()) {
    throw DimensionError("orthonormal basis cannot have more columns than rows");
  }
  if (!columns.allFinite()) {
    throw std::invalid_argument("orthonormal basis has non-finite entries");
  }
  const Eigen::Index k = columns.cols();
  const DenseMatrix gram = columns.transpose() * columns;
  const double deviation =
      k == 0 ? 0.0 : (gram - DenseMatrix::Identity(k, k)).cwiseAbs().maxCoeff();
  if (deviation > kOrthoTolerance) {
    throw std::invalid_argument("columns are not orthonormal (max |Q^T Q - I| = " +
                                std::to_string(deviation) + ")");
  }
  const auto m = static_cast<std::size_t>(columns.rows());
  return OrthonormalBasis(m, std::move(columns));
}

// ---------------------------------------------------------------------------
// IndexSet

IndexSet::IndexSet(std::size_t ambient, std::vector<std::size_t> indices)
    : ambient_(ambient), indices_(std::move(indices)) {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] >= ambient_) {
      throw std::out_of_range("index " + std::to_string(indices_[i]) +
                              " outside ambient range " + std::to_string(ambient_));
    }
    if (i > 0 && indices_[i] <= indices_[i - 1]) {
      throw std::invalid_argument("index set must be strictly increasing");
    }
  }
}

IndexSet IndexSet::full(std::size_t ambient) {
  std::vector<std::size_t> all(ambient);
  for (std::size_t i = 0; i < ambient; ++i) all[i] = i;
  return IndexSet(ambient, std::move(all));
}

// ---------------------------------------------------------------------------
// Angle

Angle::Angle(double radians) : radians_(radians) {
  if (!(radians >= 0.0 && radians <= kMax)) {
    throw std::out_of_range("angle " + std::to_string(radians) +
                            " outside [0, pi/2]");
  }
}

Angle Angle::clamped(double radians) {
  if (std::isnan(radians)) throw std::invalid_argument("angle is NaN");
  return Angle(std::clamp(radians, 0.0, kMax));
}

// ---------------------------------------------------------------------------
// Orthonormalization

namespace {

// Two rounds of classical Gram-Schmidt against the accepted columns. The
// second round restores orthogonality lost to cancellation in the first.
OrthonormalBasis gram_schmidt(Eigen::Index m, Eigen::Index count,
                              const auto& column_at, double rank_tol) {
  if (!(rank_tol > 0.0)) throw std::invalid_argument("rank_tol must be positive");
  for (Eigen::Index j = 0; j < count; ++j) {
    if (column_at(j).size() != m) {
      throw DimensionError("orthonormalize: vectors differ in length");
    }
  }
  DenseMatrix q(m, std::min(count, m));
  Eigen::Index accepted = 0;
  for (Eigen::Index j = 0; j < count && accepted < m; ++j) {
    Vector v = column_at(j);
    for (int pass = 0; pass < 2 && accepted > 0; ++pass) {
      const auto basis = q.leftCols(accepted);
      v -= basis * (basis.transpose() * v);
    }
    const double norm = v.norm();
    if (norm <= rank_tol) continue;
    q.col(accepted++) = v / norm;
  }
  return OrthonormalBasis::from_columns(q.leftCols(accepted));
}

}  // namespace

OrthonormalBasis orthonormalize(std::span<const Vector> vectors, double rank_tol) {
  if (vectors.empty()) {
    throw std::invalid_argument("orthonormalize: no vectors (ambient dimension unknown)");
  }
  const Eigen::Index m = vectors.front().size();
  return gram_schmidt(
      m, static_cast<Eigen::Index>(vectors.size()),
      [&](Eigen::Index j) -> const Vector& { return vectors[static_cast<std::size_t>(j)]; },
      rank_tol);
}

OrthonormalBasis orthonormalize_columns(const DenseMatrix& vectors, double rank_tol) {
  return gram_schmidt(
      vectors.rows(), vectors.cols(),
      [&](Eigen::Index j) -> Vector { return vectors.col(j); }, rank_tol);
}

// ---------------------------------------------------------------------------
// Projections and restricted least squares

Vector project(const OrthonormalBasis& basis, const Vector& y) {
  if (static_cast<std::size_t>(y.size()) != basis.ambient_dim()) {
    throw DimensionError("project: vector length does not match basis ambient dimension");
  }
  if (basis.empty()) return Vector::Zero(y.size());
  const auto& q = basis.columns();
  return q * (q.transpose() * y);
}

DenseMatrix restrict_rows(const OrthonormalBasis& basis, const IndexSet& omega) {
  if (omega.ambient() != basis.ambient_dim()) {
    throw DimensionError("index set ambient does not match basis ambient dimension");
  }
  const auto& q = basis.columns();
  DenseMatrix out(static_cast<Eigen::Index>(omega.size()), q.cols());
  for (std::size_t i = 0; i < omega.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = q.row(static_cast<Eigen::Index>(omega[i]));
  }
  return out;
}

Vector restrict_vector(const Vector& y, const IndexSet& omega) {
  if (static_cast<std::size_t>(y.size()) != omega.ambient()) {
    throw DimensionError("restrict_vector: length does not match index set ambient");
  }
  Vector out(static_cast<Eigen::Index>(omega.size()));
  for (std::size_t i = 0; i < omega.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = y(static_cast<Eigen::Index>(omega[i]));
  }
  return out;
}

LeastSquaresFit least_squares(const DenseMatrix& a, const Vector& y) {
  if (a.rows() != y.size()) {
    throw DimensionError("least_squares: right-hand side length mismatch");
  }
  LeastSquaresFit fit;
  if (a.cols() == 0) {
    fit.coefficients = Vector(0);
    fit.residual = y;
    return fit;
  }
  Eigen::JacobiSVD<DenseMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kPseudoInverseCutoff);
  fit.coefficients = svd.solve(y);
  fit.residual = y - a * fit.coefficients;
  fit.rank_deficient = svd.rank() < a.cols();
  return fit;
}

RestrictedResidual restricted_residual_norm(const OrthonormalBasis& basis,
                                            const IndexSet& omega,
                                            const Vector& y_omega) {
  if (omega.empty()) throw std::invalid_argument("restricted residual needs |omega| >= 1");
  if (static_cast<std::size_t>(y_omega.size()) != omega.size()) {
    throw DimensionError("restricted residual: y_omega length differs from |omega|");
  }
  if (basis.empty()) return {y_omega.norm(), false};
  const LeastSquaresFit fit = least_squares(restrict_rows(basis, omega), y_omega);
  return {fit.residual.norm(), fit.rank_deficient};
}

Vector reconstruct_column(const OrthonormalBasis& basis, const IndexSet& omega,
                          const Vector& y_omega) {
  if (basis.empty()) {
    throw std::invalid_argument("reconstruct_column: empty basis, column must be fully observed");
  }
  if (omega.empty()) throw std::invalid_argument("reconstruct_column needs |omega| >= 1");
  if (static_cast<std::size_t>(y_omega.size()) != omega.size()) {
    throw DimensionError("reconstruct_column: y_omega length differs from |omega|");
  }
  const LeastSquaresFit fit = least_squares(restrict_rows(basis, omega), y_omega);
  return basis.columns() * fit.coefficients;
}

// ---------------------------------------------------------------------------
// Coherence and angles

double coherence(const OrthonormalBasis& basis) {
  if (basis.empty()) throw std::invalid_argument("coherence of the empty basis is undefined");
  const double m = static_cast<double>(basis.ambient_dim());
  const double k = static_cast<double>(basis.dim());
  return m / k * basis.columns().rowwise().squaredNorm().maxCoeff();
}

double vector_coherence(const Vector& v) {
  const double sq = v.squaredNorm();
  if (!(sq > 0.0)) throw std::invalid_argument("coherence of the zero vector is undefined");
  return static_cast<double>(v.size()) * v.cwiseAbs2().maxCoeff() / sq;
}

Angle vector_subspace_angle(const Vector& u, const OrthonormalBasis& basis) {
  const double norm = u.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("angle to the zero vector is undefined");
  if (static_cast<std::size_t>(u.size()) != basis.ambient_dim()) {
    throw DimensionError("vector_subspace_angle: dimension mismatch");
  }
  if (basis.empty()) return Angle(Angle::kMax);
  const double ratio = (basis.columns().transpose() * u).norm() / norm;
  return Angle::clamped(std::acos(std::clamp(ratio, 0.0, 1.0)));
}

Angle subspace_subspace_angle(const OrthonormalBasis& u, const OrthonormalBasis& v) {
  if (u.ambient_dim() != v.ambient_dim()) {
    throw DimensionError("subspace_subspace_angle: ambient dimension mismatch");
  }
  if (u.empty() || v.empty()) {
    throw std::invalid_argument("subspace_subspace_angle needs nonempty subspaces");
  }
  if (u.dim() > v.dim()) return Angle(Angle::kMax);
  const DenseMatrix cross = v.columns().transpose() * u.columns();
  const Vector sigma = singular_values(cross);
  const double sigma_min = sigma(static_cast<Eigen::Index>(u.dim()) - 1);
  return Angle::clamped(std::acos(std::clamp(sigma_min, 0.0, 1.0)));
}

Angle vector_vector_angle(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) throw DimensionError("vector_vector_angle: length mismatch");
  const double nu = u.norm();
  const double nv = v.norm();
  if (!(nu > 0.0 && nv > 0.0)) throw std::invalid_argument("angle to the zero vector is undefined");
  const double c = std::abs(u.dot(v)) / (nu * nv);
  return Angle::clamped(std::acos(std::clamp(c, 0.0, 1.0)));
}

Vector singular_values(const DenseMatrix& a) {
  if (a.size() == 0) return Vector(0);
  return Eigen::JacobiSVD<DenseMatrix>(a).singularValues();
}

OrthonormalBasis top_left_singular_subspace(const DenseMatrix& a, std::size_t k) {
  if (k == 0) return OrthonormalBasis(static_cast<std::size_t>(a.rows()));
  if (k > static_cast<std::size_t>(std::min(a.rows(), a.cols()))) {
    throw std::invalid_argument("top_left_singular_subspace: k exceeds min(rows, cols)");
  }
  Eigen::BDCSVD<DenseMatrix> svd(a, Eigen::ComputeThinU);
  // Re-orthonormalize to sit inside the 1e-10 invariant regardless of SVD roundoff.
  return orthonormalize_columns(svd.matrixU().leftCols(static_cast<Eigen::Index>(k)));
}

}  // namespace adaptive_mc
