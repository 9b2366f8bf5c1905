#pragma once

// Executable checks for the inequalities the completion guarantee rests on.
//
// Deterministic statements (kcoh, noisycoh, ind, ededler, blum) are checked
// trial by trial and must never be violated beyond a 1e-9 tolerance.
// Probabilistic statements (conc, ks14, matcher) are checked by Monte Carlo:
// the empirical violation rate is compared against the stated failure
// probability plus three binomial standard errors.
//
// Every trial draws from its own stream derived from (seed, trial index), so
// a report depends only on (check, parameters, trials, seed) and not on the
// number of worker threads.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "adaptive_mc/linalg.hpp"

namespace adaptive_mc {

inline constexpr double kCheckTolerance = 1e-9;

enum class CheckKind { kDeterministic, kProbabilistic };
enum class Verdict { kPass, kFail, kNotApplicable };

std::string to_string(Verdict verdict);

using ParamValue = std::variant<std::int64_t, double, std::string, bool>;
using ParamList = std::vector<std::pair<std::string, ParamValue>>;

struct CheckReport {
  std::string name;
  CheckKind kind = CheckKind::kDeterministic;
  /// Trials on which the statement was actually evaluated (skipped and
  /// not-applicable trials are excluded and counted in params).
  std::size_t trials = 0;
  std::size_t violations = 0;
  /// Most negative slack observed; 0 when nothing was evaluated.
  double worst_margin = 0.0;
  /// Allowed violation probability; 0 for deterministic statements.
  double theoretical_bound = 0.0;
  ParamList params;
  std::uint64_t seed = 0;
  Verdict verdict = Verdict::kNotApplicable;

  double violation_rate() const;
  /// theoretical_bound + 3 sqrt(p (1 - p) / trials) with p = min(bound, 1).
  double allowed_rate() const;
  const ParamValue* param(const std::string& key) const;
};

// ---------------------------------------------------------------------------
// Per-instance margins. Nonnegative margin means the inequality holds.

/// r mu(U) - k mu(U^k) for U^k a subspace of U.
double kcoh_margin(const OrthonormalBasis& u, const OrthonormalBasis& u_k);

/// 2 mu(U) + 2 (m/k) theta(U~, U)^2 - mu(U~), with the realized angle.
double noisycoh_margin(const OrthonormalBasis& noisy, const OrthonormalBasis& clean);

/// Worst slack of (3pi/2) sqrt(k eps) - a_k along
/// a_k = a_{k-1} + c_k (pi/2) sqrt(eps / k), a_0 = 0.
double ind_worst_margin(std::span<const double> c, double epsilon);

/// d/(4m) - [(18 r/m) mu ln^2(1/delta) + 18 theta^2 ln^2(1/delta)] with d the
/// uncapped budget formula.
double ededler_margin(std::size_t m, std::size_t r, double mu, double delta, double theta);

/// 2 m ln(r/delta) - 18 ln^2(1/delta), the condition the proof reduces the
/// inequality above to.
double ededler_reduced_margin(std::size_t m, std::size_t r, double delta);

/// (pi/2) theta(b~, b) / theta(b~, U) - theta(V, V~) where U = span(a),
/// V = U + b and V~ = U + b~. nullopt when b~ lies in U.
std::optional<double> blum_margin(const DenseMatrix& a, const Vector& b, const Vector& b_tilde);

/// Quantities in the row-sampling residual bound, on squared norms.
struct Ks14Sides {
  double sampled_sq = 0.0;  // ||y_O - P_{U_O} y_O||^2
  double full_sq = 0.0;     // ||y - P_U y||^2
  double mu_basis = 0.0;    // mu(U)
  double mu_residual = 0.0; // mu of the line through y - P_U y
  double alpha = 0.0;
  double beta = 0.0;
  double zeta_bar = 0.0;
  double upper = 0.0;       // (1 + alpha) (d/m) full_sq
  double lower = 0.0;       // (d (1 - alpha) - k mu beta / (1 - zeta_bar)) / m * full_sq
  std::int64_t d_min = 0;   // precondition on d
};

Ks14Sides ks14_sides(const OrthonormalBasis& basis, const Vector& y, const IndexSet& omega,
                     double delta);

// ---------------------------------------------------------------------------
// Checks

struct KcohParams {
  std::size_t m = 20;
  std::size_t r = 5;
  std::size_t k = 2;
  /// Draw U with one direction blended toward a coordinate axis.
  bool spiked = false;
  double spike_weight = 0.99;
};

struct NoisycohParams {
  std::size_t m = 30;
  std::size_t k = 3;
  double theta_max = 0.3;
};

struct IndParams {
  std::size_t k_max = 10000;
  double epsilon = 0.01;
};

struct ConcParams {
  std::size_t m = 200;
  std::size_t k = 3;
  double epsilon = 0.01;
  double delta = 0.05;
  /// Sample size; 0 takes the budget formula at the angle cap, clamped to m.
  std::size_t d = 0;
};

struct Ks14Params {
  std::size_t m = 2000;
  std::size_t k = 4;
  double delta = 0.05;
  /// Sample size; 0 uses each trial's precondition minimum.
  std::size_t d = 800;
};

struct MatcherParams {
  std::size_t n_dim = 50;
  std::size_t r = 5;
  std::size_t summands = 90;
  double epsilon = 0.5;
  /// Spectral bound on each summand; <= 0 keeps the natural scale
  /// (max squared row norm of the basis).
  double l_bound = 0.0;
  /// Use constant summands (L/r) I instead of sampled rank-one terms.
  bool deterministic = false;
};

struct EdedlerParams {
  std::vector<std::size_t> m_values{20, 50, 100, 200, 500, 1000};
  std::vector<std::size_t> r_values{1, 2, 4, 8};
  std::vector<double> delta_values{0.001, 0.01, 0.05, 0.09};
  /// Also probe delta = exp(-(m - 1)/9), the edge of 9 ln(1/delta) < m.
  bool include_boundary = true;
};

struct BlumParams {
  std::size_t m = 20;
  std::size_t k = 3;
};

CheckReport check_kcoh(const KcohParams& p, std::size_t trials, std::uint64_t seed);
CheckReport check_noisycoh(const NoisycohParams& p, std::size_t trials, std::uint64_t seed);
CheckReport check_ind(const IndParams& p, std::size_t sequences, std::uint64_t seed);
CheckReport check_conc(const ConcParams& p, std::size_t trials, std::uint64_t seed);
CheckReport check_ks14(const Ks14Params& p, std::size_t trials, std::uint64_t seed);
CheckReport check_matcher(const MatcherParams& p, std::size_t trials, std::uint64_t seed);
CheckReport check_ededler(const EdedlerParams& p, std::size_t trials, std::uint64_t seed);
CheckReport check_blum(const BlumParams& p, std::size_t trials, std::uint64_t seed);

/// Canonical check names in report order.
const std::vector<std::string>& check_names();

/// Runs the named checks (or all of them for {"all"}) with default
/// parameters. Throws std::invalid_argument on an unknown name.
std::vector<CheckReport> run_checks(const std::vector<std::string>& names, std::size_t trials,
                                    std::uint64_t seed);

}  // namespace adaptive_mc
