#pragma once

// LREBN: adaptive column-by-column completion of M = L + zeta under bounded
// per-column noise.
//
// Columns are visited left to right. Each column is sampled on the current
// pattern Omega and its restricted residual against the current basis is
// compared with
//
//   (1 + eps) * ( sqrt(3d / 2m) * theta + sqrt(3 d k eps / 2m) ).
//
// A column whose residual exceeds the threshold is fully observed and joins
// the basis; the angle upper bound theta and the budget d are then updated
// and Omega is redrawn. Every other column is reconstructed from its
// sampled entries by least squares against the basis.
//
// Logarithms are natural throughout.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adaptive_mc/linalg.hpp"
#include "adaptive_mc/synthetic.hpp"

namespace adaptive_mc {

enum class OmegaRedraw {
  kOnUpdate,   // redraw only after the basis grows
  kPerColumn,  // ablation: fresh pattern for every column
};

std::string to_string(OmegaRedraw policy);
OmegaRedraw parse_omega_redraw(const std::string& text);

struct LrebnConfig {
  double epsilon = 0.0;
  double delta = 0.05;
  std::size_t r = 1;
  double mu_upper = 1.0;
  bool budget_cap_to_m = true;
  bool angle_cap_enabled = true;
  OmegaRedraw omega_redraw = OmegaRedraw::kOnUpdate;
  /// Replace mu_upper after the first basis update by the heuristic
  /// max(1, 2 * coherence(basis) * k / r).
  bool estimate_mu = false;
  /// Residuals at or below this are treated as zero by the column test, so
  /// roundoff on an in-span column never triggers a full observation.
  double residual_floor = 1e-9;
  double rank_tol = kDefaultRankTolerance;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument naming the violated constraint.
  void validate() const;
};

enum class ColumnMode { kReconstructed, kFullyObserved };

std::string to_string(ColumnMode mode);

/// State the column test saw when processing one column.
struct ColumnRecord {
  std::size_t col_index = 0;
  ColumnMode mode = ColumnMode::kReconstructed;
  std::size_t k_at_time = 0;
  std::int64_t d_at_time = 0;
  double theta_tilde = 0.0;
  double residual = 0.0;
  double threshold = 0.0;
  bool degenerate = false;
};

/// One entry per basis update, plus the initial state (k = 0).
struct UpdateRecord {
  std::size_t after_column = 0;  // column that triggered it; 0 for the initial entry
  std::size_t k = 0;
  double theta_tilde = 0.0;
  double theta_new_column = 0.0;  // angle of the new column to the previous basis
  double mu = 0.0;                // coherence value fed to the budget formula
  double budget_raw = 0.0;        // formula value before ceil/clamp
  std::int64_t d = 0;             // budget in force afterwards
};

struct RecoveryResult {
  DenseMatrix M_tilde;
  std::vector<ColumnMode> column_mode;
  std::vector<ColumnRecord> columns;
  std::vector<UpdateRecord> updates;
  std::size_t observations = 0;
  std::size_t k_final = 0;
  double theta_final = 0.0;
  /// k exceeded r at some point (a failure event of the dimension bound).
  bool dimension_bound_violated = false;
  OrthonormalBasis basis;
};

/// 72 mu r ln(1/delta)^2 + 8 m theta^2 ln(r/delta), unrounded.
double budget_formula(double mu, std::size_t r, double delta, std::size_t m,
                      double theta_tilde);

/// ceil(formula) clamped to [1, m] (or only to >= 1 when budget_cap_to_m is
/// off).
std::int64_t clamp_budget(double raw, std::size_t m, bool cap_to_m);

/// Budget before any column is seen: ceil(72 mu r ln(1/delta)^2).
std::int64_t initial_budget(const LrebnConfig& cfg, std::size_t m);

/// Budget after an angle update, with mu = cfg.mu_upper.
std::int64_t updated_budget(const LrebnConfig& cfg, std::size_t m, Angle theta_tilde);

/// Same with an explicit coherence value.
std::int64_t updated_budget(const LrebnConfig& cfg, std::size_t m, Angle theta_tilde,
                            double mu);

/// (1 + eps) (sqrt(3d/2m) theta + sqrt(3 d k eps / 2m)).
double column_threshold(std::int64_t d, std::size_t m, std::size_t k, double epsilon,
                        Angle theta_tilde);

/// True when the column carries a new direction and must be fully observed:
/// residual > max(threshold, cfg.residual_floor).
bool column_test(double residual, std::int64_t d, std::size_t m, std::size_t k,
                 const LrebnConfig& cfg, Angle theta_tilde);

/// Thrown when the algorithm's own bookkeeping contradicts itself.
class InconsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Bound on the angle between a clean column and its noisy observation,
/// arcsin(min(1, eps / (1 - eps))).
double noise_angle_bound(double epsilon);

/// Upper-bound recursion for theta(U~^k, U^k) after the k-th column joins:
///   prev + (pi/2) * noise_angle / max(theta_new - prev, sqrt(k eps)),
/// capped at min(3pi/2 sqrt(k eps), pi/2) when angle_cap_enabled.
Angle angle_increment(Angle theta_prev, Angle theta_new_column, const LrebnConfig& cfg,
                      std::size_t k);

/// (m/d) eps + (m/d + 1) (sqrt(24) theta + sqrt(8 k eps)) (1 + eps).
double theorem_error_bound(std::size_t m, std::int64_t d, std::size_t k, double epsilon,
                           double theta_tilde);

/// Runs the algorithm against `oracle`. Reads only sampled entries and fully
/// observed columns.
RecoveryResult run_lrebn(ObservationOracle& oracle, const LrebnConfig& cfg);

}  // namespace adaptive_mc
