#include "adaptive_mc/lrebn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "adaptive_mc/sampling.hpp"

namespace adaptive_mc {

std::string to_string(OmegaRedraw policy) {
  return policy == OmegaRedraw::kOnUpdate ? "on-update" : "per-column";
}

OmegaRedraw parse_omega_redraw(const std::string& text) {
  if (text == "on-update") return OmegaRedraw::kOnUpdate;
  if (text == "per-column") return OmegaRedraw::kPerColumn;
  throw std::invalid_argument("unknown omega redraw policy '" + text +
                              "' (expected on-update or per-column)");
}

std::string to_string(ColumnMode mode) {
  return mode == ColumnMode::kFullyObserved ? "fully_observed" : "reconstructed";
}

void LrebnConfig::validate() const {
  require_valid_epsilon(epsilon);
  if (r < 1) throw std::invalid_argument("r must be >= 1");
  if (!(delta > 0.0 && delta < 0.1)) {
    throw std::invalid_argument("delta must satisfy 0 < delta < 0.1");
  }
  if (r >= 2 && delta > std::pow(static_cast<double>(r), -1.0 / 8.0)) {
    throw std::invalid_argument("delta must be <= r^(-1/8)");
  }
  if (!(mu_upper >= 1.0) || !std::isfinite(mu_upper)) {
    throw std::invalid_argument("mu_upper must be >= 1");
  }
  if (!(residual_floor >= 0.0)) throw std::invalid_argument("residual_floor must be >= 0");
  if (!(rank_tol > 0.0)) throw std::invalid_argument("rank_tol must be > 0");
}

// ---------------------------------------------------------------------------
// Budget, threshold, angle recursion

double budget_formula(double mu, std::size_t r, double delta, std::size_t m,
                      double theta_tilde) {
  const double log_inv_delta = std::log(1.0 / delta);
  const double rd = static_cast<double>(r);
  return 72.0 * mu * rd * log_inv_delta * log_inv_delta +
         8.0 * static_cast<double>(m) * theta_tilde * theta_tilde * std::log(rd / delta);
}

std::int64_t clamp_budget(double raw, std::size_t m, bool cap_to_m) {
  if (!std::isfinite(raw)) throw std::invalid_argument("budget is not finite");
  std::int64_t d = static_cast<std::int64_t>(std::ceil(raw));
  d = std::max<std::int64_t>(d, 1);
  if (cap_to_m) d = std::min<std::int64_t>(d, static_cast<std::int64_t>(m));
  return d;
}

std::int64_t initial_budget(const LrebnConfig& cfg, std::size_t m) {
  cfg.validate();
  return clamp_budget(budget_formula(cfg.mu_upper, cfg.r, cfg.delta, m, 0.0), m,
                      cfg.budget_cap_to_m);
}

std::int64_t updated_budget(const LrebnConfig& cfg, std::size_t m, Angle theta_tilde) {
  return updated_budget(cfg, m, theta_tilde, cfg.mu_upper);
}

std::int64_t updated_budget(const LrebnConfig& cfg, std::size_t m, Angle theta_tilde,
                            double mu) {
  cfg.validate();
  return clamp_budget(budget_formula(mu, cfg.r, cfg.delta, m, theta_tilde.radians()), m,
                      cfg.budget_cap_to_m);
}

double column_threshold(std::int64_t d, std::size_t m, std::size_t k, double epsilon,
                        Angle theta_tilde) {
  const double scale = 3.0 * static_cast<double>(d) / (2.0 * static_cast<double>(m));
  return (1.0 + epsilon) * (std::sqrt(scale) * theta_tilde.radians() +
                            std::sqrt(scale * static_cast<double>(k) * epsilon));
}

bool column_test(double residual, std::int64_t d, std::size_t m, std::size_t k,
                 const LrebnConfig& cfg, Angle theta_tilde) {
  if (!(residual >= 0.0)) throw std::invalid_argument("residual must be >= 0");
  const double threshold = column_threshold(d, m, k, cfg.epsilon, theta_tilde);
  return residual > std::max(threshold, cfg.residual_floor);
}

double noise_angle_bound(double epsilon) {
  if (epsilon <= 0.0) return 0.0;
  return std::asin(std::min(1.0, epsilon / (1.0 - epsilon)));
}

Angle angle_increment(Angle theta_prev, Angle theta_new_column, const LrebnConfig& cfg,
                      std::size_t k) {
  if (k < 1) throw std::invalid_argument("angle_increment: k counts the new column, so k >= 1");
  const double numerator = noise_angle_bound(cfg.epsilon);
  if (numerator == 0.0) return theta_prev;
  if (theta_new_column.radians() == 0.0) {
    throw InconsistencyError(
        "accepted column lies in the previous span; the column test should not have fired");
  }
  const double floor = std::sqrt(static_cast<double>(k) * cfg.epsilon);
  const double denominator = std::max(theta_new_column.radians() - theta_prev.radians(), floor);
  double next = theta_prev.radians() + std::numbers::pi / 2.0 * numerator / denominator;
  if (cfg.angle_cap_enabled) {
    next = std::min(next, 1.5 * std::numbers::pi * floor);
  }
  return Angle(std::clamp(next, theta_prev.radians(), Angle::kMax));
}

double theorem_error_bound(std::size_t m, std::int64_t d, std::size_t k, double epsilon,
                           double theta_tilde) {
  if (d < 1) throw std::invalid_argument("theorem_error_bound: d must be >= 1");
  const double ratio = static_cast<double>(m) / static_cast<double>(d);
  return ratio * epsilon +
         (ratio + 1.0) *
             (std::sqrt(24.0) * theta_tilde + std::sqrt(8.0 * static_cast<double>(k) * epsilon)) *
             (1.0 + epsilon);
}

// ---------------------------------------------------------------------------
// Main loop

namespace {

double budget_coherence(const LrebnConfig& cfg, const OrthonormalBasis& basis) {
  if (!cfg.estimate_mu || basis.empty()) return cfg.mu_upper;
  const double k = static_cast<double>(basis.dim());
  return std::max(1.0, 2.0 * coherence(basis) * k / static_cast<double>(cfg.r));
}

}  // namespace

RecoveryResult run_lrebn(ObservationOracle& oracle, const LrebnConfig& cfg) {
  cfg.validate();
  const std::size_t m = oracle.rows();
  const std::size_t n = oracle.cols();
  if (m == 0) throw std::invalid_argument("run_lrebn: matrix has no rows");

  RecoveryResult result;
  result.M_tilde = DenseMatrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  result.column_mode.reserve(n);
  result.columns.reserve(n);

  Rng rng(cfg.seed, Stream::kOmega);
  OrthonormalBasis basis(m);
  std::vector<Vector> accepted;
  Angle theta;
  double mu = cfg.mu_upper;
  double raw_budget = budget_formula(mu, cfg.r, cfg.delta, m, 0.0);
  std::int64_t d = clamp_budget(raw_budget, m, cfg.budget_cap_to_m);
  result.updates.push_back({0, 0, 0.0, 0.0, mu, raw_budget, d});

  auto draw_omega = [&] {
    const auto size = static_cast<std::size_t>(std::min<std::int64_t>(d, static_cast<std::int64_t>(m)));
    return sample_uniform_subset(m, size, rng);
  };

  IndexSet omega = n > 0 ? draw_omega() : IndexSet::full(m);

  for (std::size_t i = 0; i < n; ++i) {
    if (cfg.omega_redraw == OmegaRedraw::kPerColumn && i > 0) omega = draw_omega();

    const Vector y_omega = oracle.entries(omega, i);
    const std::size_t k = basis.dim();
    const RestrictedResidual residual = restricted_residual_norm(basis, omega, y_omega);

    ColumnRecord record;
    record.col_index = i;
    record.k_at_time = k;
    record.d_at_time = d;
    record.theta_tilde = theta.radians();
    record.residual = residual.norm;
    record.threshold = column_threshold(d, m, k, cfg.epsilon, theta);
    record.degenerate = residual.degenerate;

    const auto col = static_cast<Eigen::Index>(i);
    if (column_test(residual.norm, d, m, k, cfg, theta)) {
      record.mode = ColumnMode::kFullyObserved;
      const Vector full = oracle.column(i);
      result.M_tilde.col(col) = full;

      const Angle theta_new = vector_subspace_angle(full, basis);
      accepted.push_back(full);
      OrthonormalBasis grown = orthonormalize(accepted, cfg.rank_tol);
      if (grown.dim() > k) {
        basis = std::move(grown);
        const std::size_t k_new = basis.dim();
        theta = angle_increment(theta, theta_new, cfg, k_new);
        mu = budget_coherence(cfg, basis);
        raw_budget = budget_formula(mu, cfg.r, cfg.delta, m, theta.radians());
        d = clamp_budget(raw_budget, m, cfg.budget_cap_to_m);
        if (k_new > cfg.r) result.dimension_bound_violated = true;
        result.updates.push_back(
            {i, k_new, theta.radians(), theta_new.radians(), mu, raw_budget, d});
        if (cfg.omega_redraw == OmegaRedraw::kOnUpdate) omega = draw_omega();
      } else {
        // Numerically inside the span after all; keep the observation, not the direction.
        accepted.pop_back();
      }
    } else {
      record.mode = ColumnMode::kReconstructed;
      if (k > 0) result.M_tilde.col(col) = reconstruct_column(basis, omega, y_omega);
    }
    result.column_mode.push_back(record.mode);
    result.columns.push_back(record);
  }

  result.observations = oracle.entry_count();
  result.k_final = basis.dim();
  result.theta_final = theta.radians();
  result.basis = std::move(basis);
  return result;
}

}  // namespace adaptive_mc
