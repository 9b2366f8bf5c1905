#pragma once

// Dense linear-algebra primitives shared by the completion algorithm and the
// lemma checks: orthonormal bases, projections, least-squares reconstruction
// from a row subset, coherence and principal angles.

#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace adaptive_mc {

using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Raised when operands disagree on ambient dimension or length.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws std::invalid_argument unless `a` is non-empty and every entry is
/// finite.
void require_finite(const DenseMatrix& a, const char* what);

inline constexpr double kOrthoTolerance = 1e-10;
inline constexpr double kDefaultRankTolerance = 1e-10;
inline constexpr double kPseudoInverseCutoff = 1e-10;

/// An m x k matrix whose columns are orthonormal to within kOrthoTolerance
/// (entrywise on Q^T Q - I). k = 0 is the empty basis of R^m.
class OrthonormalBasis {
 public:
  explicit OrthonormalBasis(std::size_t ambient_dim = 0);

  /// Adopts `columns` after checking the orthonormality invariant.
  static OrthonormalBasis from_columns(DenseMatrix columns);

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t dim() const { return static_cast<std::size_t>(columns_.cols()); }
  bool empty() const { return dim() == 0; }
  const DenseMatrix& columns() const { return columns_; }

 private:
  OrthonormalBasis(std::size_t ambient_dim, DenseMatrix columns);

  std::size_t ambient_dim_;
  DenseMatrix columns_;
};

/// Sorted, duplicate-free subset of {0, ..., ambient-1}.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::size_t ambient, std::vector<std::size_t> indices);

  /// All of [0, ambient).
  static IndexSet full(std::size_t ambient);

  std::size_t ambient() const { return ambient_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  std::span<const std::size_t> indices() const { return indices_; }
  std::size_t operator[](std::size_t i) const { return indices_[i]; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::size_t ambient_ = 0;
  std::vector<std::size_t> indices_;
};

/// An angle in [0, pi/2].
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double radians);

  /// Clamps into [0, pi/2] instead of throwing; used where roundoff can
  /// push an arccos/arcsin result marginally outside the range.
  static Angle clamped(double radians);
  static constexpr double kMax = std::numbers::pi / 2.0;

  constexpr double radians() const { return radians_; }

  friend constexpr auto operator<=>(const Angle&, const Angle&) = default;

 private:
  double radians_ = 0.0;
};

/// Gram-Schmidt with a second re-orthogonalization pass. Vectors whose
/// residual after projection onto the already accepted vectors has norm
/// <= rank_tol are dropped.
OrthonormalBasis orthonormalize(std::span<const Vector> vectors,
                                double rank_tol = kDefaultRankTolerance);

/// Same, over the columns of `vectors`.
OrthonormalBasis orthonormalize_columns(const DenseMatrix& vectors,
                                        double rank_tol = kDefaultRankTolerance);

/// basis * (basis^T y); the zero vector for the empty basis.
Vector project(const OrthonormalBasis& basis, const Vector& y);

/// Rows of the basis selected by `omega`, as an |omega| x k matrix.
DenseMatrix restrict_rows(const OrthonormalBasis& basis, const IndexSet& omega);

/// Entries of `y` selected by `omega`.
Vector restrict_vector(const Vector& y, const IndexSet& omega);

struct LeastSquaresFit {
  Vector coefficients;  // minimum-norm argmin ||A c - y||
  Vector residual;      // y - A c
  bool rank_deficient = false;
};

/// Minimum-norm least squares with singular values below
/// kPseudoInverseCutoff * sigma_max treated as zero.
LeastSquaresFit least_squares(const DenseMatrix& a, const Vector& y);

struct RestrictedResidual {
  double norm = 0.0;
  /// The row-restricted basis lost rank at kPseudoInverseCutoff.
  bool degenerate = false;
};

/// || y_omega - U_omega U_omega^+ y_omega ||. The restricted basis is not
/// orthonormal in general, so this goes through least squares.
RestrictedResidual restricted_residual_norm(const OrthonormalBasis& basis,
                                            const IndexSet& omega,
                                            const Vector& y_omega);

/// U c, with c = argmin || U_omega c - y_omega || (minimum norm).
/// Throws std::invalid_argument for the empty basis.
Vector reconstruct_column(const OrthonormalBasis& basis, const IndexSet& omega,
                          const Vector& y_omega);

/// (m/k) max_j ||P_U e_j||^2, i.e. (m/k) times the largest squared row norm.
double coherence(const OrthonormalBasis& basis);

/// Coherence of the line spanned by a nonzero vector: m max_j v_j^2 / ||v||^2.
double vector_coherence(const Vector& v);

/// theta(u, V) = arccos(||P_V u|| / ||u||); pi/2 for the empty basis.
Angle vector_subspace_angle(const Vector& u, const OrthonormalBasis& basis);

/// theta(U, V) = max over unit u in U of theta(u, V), the largest principal
/// angle measured from U into V. Asymmetric: pi/2 whenever dim U > dim V.
Angle subspace_subspace_angle(const OrthonormalBasis& u, const OrthonormalBasis& v);

/// Angle between two nonzero vectors, folded into [0, pi/2] (lines, not rays).
Angle vector_vector_angle(const Vector& u, const Vector& v);

/// Singular values of `a`, descending.
Vector singular_values(const DenseMatrix& a);

/// Orthonormal basis of the leading `k` left singular vectors of `a`.
OrthonormalBasis top_left_singular_subspace(const DenseMatrix& a, std::size_t k);

}  // namespace adaptive_mc
