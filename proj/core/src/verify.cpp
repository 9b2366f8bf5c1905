#include "adaptive_mc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "adaptive_mc/lrebn.hpp"
#include "adaptive_mc/parallel.hpp"
#include "adaptive_mc/sampling.hpp"

namespace adaptive_mc {

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kPass: return "PASS";
    case Verdict::kFail: return "FAIL";
    case Verdict::kNotApplicable: return "N/A";
  }
  return "N/A";
}

double CheckReport::violation_rate() const {
  return trials == 0 ? 0.0 : static_cast<double>(violations) / static_cast<double>(trials);
}

double CheckReport::allowed_rate() const {
  if (trials == 0) return theoretical_bound;
  const double p = std::min(theoretical_bound, 1.0);
  return theoretical_bound + 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

const ParamValue* CheckReport::param(const std::string& key) const {
  for (const auto& [k, v] : params) {
    if (k == key) return &v;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Margins

double kcoh_margin(const OrthonormalBasis& u, const OrthonormalBasis& u_k) {
  return static_cast<double>(u.dim()) * coherence(u) -
         static_cast<double>(u_k.dim()) * coherence(u_k);
}

double noisycoh_margin(const OrthonormalBasis& noisy, const OrthonormalBasis& clean) {
  const double theta = subspace_subspace_angle(noisy, clean).radians();
  const double ratio = static_cast<double>(clean.ambient_dim()) / static_cast<double>(clean.dim());
  return 2.0 * coherence(clean) + 2.0 * ratio * theta * theta - coherence(noisy);
}

double ind_worst_margin(std::span<const double> c, double epsilon) {
  double a = 0.0;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    a += c[i] * std::numbers::pi / 2.0 * std::sqrt(epsilon / k);
    worst = std::min(worst, 1.5 * std::numbers::pi * std::sqrt(k * epsilon) - a);
  }
  return c.empty() ? 0.0 : worst;
}

double ededler_margin(std::size_t m, std::size_t r, double mu, double delta, double theta) {
  const double md = static_cast<double>(m);
  const double l = std::log(1.0 / delta);
  const double d = budget_formula(mu, r, delta, m, theta);
  return d / (4.0 * md) -
         (18.0 * static_cast<double>(r) / md * mu * l * l + 18.0 * theta * theta * l * l);
}

double ededler_reduced_margin(std::size_t m, std::size_t r, double delta) {
  const double l = std::log(1.0 / delta);
  return 2.0 * static_cast<double>(m) * std::log(static_cast<double>(r) / delta) - 18.0 * l * l;
}

std::optional<double> blum_margin(const DenseMatrix& a, const Vector& b, const Vector& b_tilde) {
  const auto m = static_cast<std::size_t>(b.size());
  const OrthonormalBasis u = a.cols() == 0 ? OrthonormalBasis(m) : orthonormalize_columns(a);
  const double to_u = vector_subspace_angle(b_tilde, u).radians();
  if (to_u < 1e-12) return std::nullopt;

  DenseMatrix with_b(a.rows(), a.cols() + 1);
  with_b << a, b;
  DenseMatrix with_b_tilde(a.rows(), a.cols() + 1);
  with_b_tilde << a, b_tilde;
  const OrthonormalBasis v = orthonormalize_columns(with_b);
  const OrthonormalBasis v_tilde = orthonormalize_columns(with_b_tilde);

  const double lhs = subspace_subspace_angle(v, v_tilde).radians();
  const double rhs = std::numbers::pi / 2.0 * vector_vector_angle(b_tilde, b).radians() / to_u;
  return rhs - lhs;
}

Ks14Sides ks14_sides(const OrthonormalBasis& basis, const Vector& y, const IndexSet& omega,
                     double delta) {
  if (basis.empty()) throw std::invalid_argument("ks14_sides needs a nonempty basis");
  Ks14Sides s;
  const double m = static_cast<double>(basis.ambient_dim());
  const double k = static_cast<double>(basis.dim());
  const double d = static_cast<double>(omega.size());
  const double log_inv = std::log(1.0 / delta);

  const Vector residual = y - project(basis, y);
  s.full_sq = residual.squaredNorm();
  s.mu_basis = coherence(basis);
  s.mu_residual = s.full_sq > 1e-24 * std::max(1.0, y.squaredNorm()) ? vector_coherence(residual) : 1.0;
  const double r = restricted_residual_norm(basis, omega, restrict_vector(y, omega)).norm;
  s.sampled_sq = r * r;

  s.alpha = std::sqrt(2.0 * s.mu_residual / d * log_inv) + 2.0 * s.mu_residual / (3.0 * d) * log_inv;
  s.beta = (1.0 + 2.0 * log_inv) * (1.0 + 2.0 * log_inv);
  s.zeta_bar = std::sqrt(8.0 * k * s.mu_basis / (3.0 * d) * std::log(2.0 * k / delta));
  s.upper = (1.0 + s.alpha) * d / m * s.full_sq;
  s.lower = (d * (1.0 - s.alpha) - k * s.mu_basis * s.beta / (1.0 - s.zeta_bar)) / m * s.full_sq;
  s.d_min = static_cast<std::int64_t>(std::ceil(std::max(
      8.0 / 3.0 * k * s.mu_basis * std::log(2.0 * k / delta), 4.0 * s.mu_residual * log_inv)));
  return s;
}

// ---------------------------------------------------------------------------
// Trial machinery

namespace {

struct Outcome {
  bool evaluated = false;
  bool violated = false;
  double margin = 0.0;
  // Check-specific tallies (skips, secondary forms).
  std::int64_t aux[4] = {0, 0, 0, 0};
};

template <class Fn>
std::vector<Outcome> run_trials(std::size_t trials, std::uint64_t seed, Fn&& fn) {
  std::vector<Outcome> out(trials);
  parallel_for(trials, [&](std::size_t t) {
    Rng rng(RngState{derive_seed(seed, t), static_cast<std::uint64_t>(Stream::kVerify)});
    out[t] = fn(t, rng);
  });
  return out;
}

struct Tally {
  std::size_t evaluated = 0;
  std::size_t violations = 0;
  double worst = 0.0;
  std::int64_t aux[4] = {0, 0, 0, 0};
};

Tally tally(const std::vector<Outcome>& outcomes) {
  Tally t;
  bool any = false;
  for (const Outcome& o : outcomes) {
    for (int i = 0; i < 4; ++i) t.aux[i] += o.aux[i];
    if (!o.evaluated) continue;
    ++t.evaluated;
    if (o.violated) ++t.violations;
    t.worst = any ? std::min(t.worst, o.margin) : o.margin;
    any = true;
  }
  return t;
}

CheckReport make_report(std::string name, CheckKind kind, const Tally& t, double bound,
                        std::uint64_t seed, ParamList params) {
  CheckReport rep;
  rep.name = std::move(name);
  rep.kind = kind;
  rep.trials = t.evaluated;
  rep.violations = t.violations;
  rep.worst_margin = t.worst;
  rep.theoretical_bound = bound;
  rep.seed = seed;
  rep.params = std::move(params);
  if (rep.trials == 0) {
    rep.verdict = Verdict::kNotApplicable;
  } else if (kind == CheckKind::kDeterministic) {
    rep.verdict = rep.violations == 0 ? Verdict::kPass : Verdict::kFail;
  } else {
    rep.verdict = rep.violation_rate() <= rep.allowed_rate() ? Verdict::kPass : Verdict::kFail;
  }
  return rep;
}

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

OrthonormalBasis random_basis(std::size_t m, std::size_t k, Rng& rng) {
  for (;;) {
    OrthonormalBasis b = orthonormalize_columns(
        rng.gaussian_matrix(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)));
    if (b.dim() == k) return b;
  }
}

// Rotates each column u_i of `clean` by angle phi_i toward a direction w_i,
// where the w_i are orthonormal and orthogonal to span(clean). The principal
// angles between the two subspaces are then exactly the phi_i.
OrthonormalBasis rotate_basis(const OrthonormalBasis& clean, const Vector& phi, Rng& rng) {
  const auto m = static_cast<Eigen::Index>(clean.ambient_dim());
  const auto k = static_cast<Eigen::Index>(clean.dim());
  if (2 * k > m) throw std::invalid_argument("rotate_basis needs 2k <= m");
  const DenseMatrix& u = clean.columns();
  for (;;) {
    DenseMatrix g = rng.gaussian_matrix(m, k);
    g -= u * (u.transpose() * g);
    const OrthonormalBasis w = orthonormalize_columns(g);
    if (static_cast<Eigen::Index>(w.dim()) != k) continue;
    DenseMatrix rotated(m, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      rotated.col(i) = std::cos(phi(i)) * u.col(i) + std::sin(phi(i)) * w.columns().col(i);
    }
    return orthonormalize_columns(rotated);
  }
}

// Columns: constant, then cos/sin pairs of increasing frequency. Row norms
// are all equal (coherence exactly 1) when r is odd.
OrthonormalBasis fourier_basis(std::size_t n, std::size_t r) {
  const auto rows = static_cast<Eigen::Index>(n);
  DenseMatrix q(rows, static_cast<Eigen::Index>(r));
  const double nd = static_cast<double>(n);
  for (Eigen::Index t = 0; t < rows; ++t) {
    q(t, 0) = 1.0 / std::sqrt(nd);
    for (Eigen::Index c = 1; c < q.cols(); ++c) {
      const double freq = static_cast<double>((c + 1) / 2);
      const double phase = 2.0 * std::numbers::pi * freq * static_cast<double>(t) / nd;
      q(t, c) = std::sqrt(2.0 / nd) * (c % 2 == 1 ? std::cos(phase) : std::sin(phase));
    }
  }
  return orthonormalize_columns(q);
}

}  // namespace

// ---------------------------------------------------------------------------
// Deterministic statements

CheckReport check_kcoh(const KcohParams& p, std::size_t trials, std::uint64_t seed) {
  if (!(p.k >= 1 && p.k <= p.r && p.r <= p.m)) {
    throw std::invalid_argument("check_kcoh requires 1 <= k <= r <= m");
  }
  auto outcomes = run_trials(trials, seed, [&](std::size_t, Rng& rng) {
    DenseMatrix raw = rng.gaussian_matrix(static_cast<Eigen::Index>(p.m), static_cast<Eigen::Index>(p.r));
    if (p.spiked) {
      Vector spike = (1.0 - p.spike_weight) * rng.unit_vector(raw.rows());
      spike(static_cast<Eigen::Index>(rng.uniform_index(p.m))) += p.spike_weight;
      raw.col(0) = spike;
    }
    const OrthonormalBasis u = orthonormalize_columns(raw);
    const DenseMatrix mix = rng.gaussian_matrix(static_cast<Eigen::Index>(p.r), static_cast<Eigen::Index>(p.k));
    const OrthonormalBasis u_k = orthonormalize_columns(u.columns() * mix);
    Outcome o;
    if (u.dim() != p.r || u_k.dim() != p.k) return o;
    o.evaluated = true;
    o.margin = kcoh_margin(u, u_k);
    o.violated = o.margin < -kCheckTolerance;
    return o;
  });
  return make_report("kcoh", CheckKind::kDeterministic, tally(outcomes), 0.0, seed,
                     {{"m", as_int(p.m)}, {"r", as_int(p.r)}, {"k", as_int(p.k)},
                      {"spiked", p.spiked}});
}

CheckReport check_noisycoh(const NoisycohParams& p, std::size_t trials, std::uint64_t seed) {
  if (!(p.k >= 1 && 2 * p.k <= p.m)) throw std::invalid_argument("check_noisycoh requires 1 <= k <= m/2");
  if (!(p.theta_max > 0.0 && p.theta_max < Angle::kMax)) {
    throw std::invalid_argument("check_noisycoh requires theta_max in (0, pi/2)");
  }
  auto outcomes = run_trials(trials, seed, [&](std::size_t, Rng& rng) {
    const OrthonormalBasis clean = random_basis(p.m, p.k, rng);
    Vector phi(static_cast<Eigen::Index>(p.k));
    for (Eigen::Index i = 0; i < phi.size(); ++i) phi(i) = rng.uniform(0.0, p.theta_max);
    const OrthonormalBasis noisy = rotate_basis(clean, phi, rng);
    Outcome o;
    o.evaluated = true;
    o.margin = noisycoh_margin(noisy, clean);
    o.violated = o.margin < -kCheckTolerance;
    return o;
  });
  return make_report("noisycoh", CheckKind::kDeterministic, tally(outcomes), 0.0, seed,
                     {{"m", as_int(p.m)}, {"k", as_int(p.k)}, {"theta_max", p.theta_max}});
}

CheckReport check_ind(const IndParams& p, std::size_t sequences, std::uint64_t seed) {
  if (p.k_max < 1) throw std::invalid_argument("check_ind requires k_max >= 1");
  if (!(p.epsilon > 0.0)) throw std::invalid_argument("check_ind requires epsilon > 0");
  auto outcomes = run_trials(sequences, seed, [&](std::size_t t, Rng& rng) {
    // Sequence 0 is the extremal one (every step at its maximum).
    std::vector<double> c(p.k_max, 1.0);
    if (t > 0) {
      for (double& ci : c) ci = rng.uniform01();
    }
    Outcome o;
    o.evaluated = true;
    o.margin = ind_worst_margin(c, p.epsilon);
    o.violated = o.margin < -1e-12;
    return o;
  });
  return make_report("ind", CheckKind::kDeterministic, tally(outcomes), 0.0, seed,
                     {{"k_max", as_int(p.k_max)}, {"epsilon", p.epsilon}});
}

CheckReport check_ededler(const EdedlerParams& p, std::size_t trials, std::uint64_t seed) {
  struct GridPoint {
    std::size_t m;
    std::size_t r;
    double delta;
  };
  std::vector<GridPoint> grid;
  std::int64_t skipped_points = 0;
  for (const std::size_t m : p.m_values) {
    std::vector<double> deltas = p.delta_values;
    if (p.include_boundary) {
      const double edge = std::exp(-(static_cast<double>(m) - 1.0) / 9.0);
      if (edge < 1.0) deltas.push_back(edge);
    }
    for (const std::size_t r : p.r_values) {
      for (const double delta : deltas) {
        if (!(delta > 0.0 && delta < 1.0) || r < 1 || r > m ||
            !(9.0 * std::log(1.0 / delta) < static_cast<double>(m))) {
          ++skipped_points;
          continue;
        }
        grid.push_back({m, r, delta});
      }
    }
  }
  if (grid.empty()) throw std::invalid_argument("check_ededler: no grid point satisfies 9 ln(1/delta) < m");

  auto outcomes = run_trials(trials, seed, [&](std::size_t t, Rng& rng) {
    const GridPoint& g = grid[t % grid.size()];
    // First pass over the grid probes theta = 0; later passes sample it.
    const double theta = t < grid.size() ? 0.0 : rng.uniform(0.0, Angle::kMax);
    const double mu = rng.uniform(1.0, static_cast<double>(g.m) / static_cast<double>(g.r));
    Outcome o;
    o.evaluated = true;
    o.margin = ededler_margin(g.m, g.r, mu, g.delta, theta);
    o.violated = o.margin < -kCheckTolerance;
    o.aux[0] = ededler_reduced_margin(g.m, g.r, g.delta) <= 0.0 ? 1 : 0;
    return o;
  });
  const Tally t = tally(outcomes);
  return make_report("ededler", CheckKind::kDeterministic, t, 0.0, seed,
                     {{"grid_points", as_int(grid.size())},
                      {"grid_points_skipped", skipped_points},
                      {"reduced_form_violations", t.aux[0]}});
}

CheckReport check_blum(const BlumParams& p, std::size_t trials, std::uint64_t seed) {
  if (!(p.k >= 2 && p.k <= p.m)) throw std::invalid_argument("check_blum requires 2 <= k <= m");
  auto outcomes = run_trials(trials, seed, [&](std::size_t, Rng& rng) {
    const auto m = static_cast<Eigen::Index>(p.m);
    const DenseMatrix a = rng.gaussian_matrix(m, static_cast<Eigen::Index>(p.k) - 1);
    const Vector b = rng.gaussian_vector(m);
    // Perturbation sizes span small to comparable-to-b.
    const double scale = std::pow(10.0, rng.uniform(-4.0, 0.0)) * b.norm();
    const Vector b_tilde = b + scale * rng.unit_vector(m);
    Outcome o;
    const auto margin = blum_margin(a, b, b_tilde);
    if (!margin) {
      o.aux[0] = 1;
      return o;
    }
    o.evaluated = true;
    o.margin = *margin;
    o.violated = o.margin < -kCheckTolerance;
    return o;
  });
  const Tally t = tally(outcomes);
  return make_report("blum", CheckKind::kDeterministic, t, 0.0, seed,
                     {{"m", as_int(p.m)}, {"k", as_int(p.k)}, {"skipped_degenerate", t.aux[0]}});
}

// ---------------------------------------------------------------------------
// Probabilistic statements

CheckReport check_conc(const ConcParams& p, std::size_t trials, std::uint64_t seed) {
  if (!(p.k >= 1 && 2 * (p.k - 1) < p.m)) throw std::invalid_argument("check_conc requires 1 <= k, 2(k-1) < m");
  require_valid_epsilon(p.epsilon);
  if (!(p.delta > 0.0 && p.delta < 1.0)) throw std::invalid_argument("check_conc requires 0 < delta < 1");

  std::size_t d = p.d;
  if (d == 0) {
    const double cap = 1.5 * std::numbers::pi * std::sqrt(static_cast<double>(p.k) * p.epsilon);
    d = static_cast<std::size_t>(clamp_budget(
        budget_formula(1.0, p.k, p.delta, p.m, std::min(cap, Angle::kMax)), p.m, true));
  }
  if (d < 1 || d > p.m) throw std::invalid_argument("check_conc requires 1 <= d <= m");

  const std::size_t prev_dim = p.k - 1;
  const double noise_angle = noise_angle_bound(p.epsilon);
  auto outcomes = run_trials(trials, seed, [&](std::size_t, Rng& rng) {
    const auto m = static_cast<Eigen::Index>(p.m);
    OrthonormalBasis clean(p.m);
    OrthonormalBasis noisy(p.m);
    double theta = 0.0;
    if (prev_dim > 0) {
      clean = random_basis(p.m, prev_dim, rng);
      Vector phi(static_cast<Eigen::Index>(prev_dim));
      for (Eigen::Index i = 0; i < phi.size(); ++i) phi(i) = rng.uniform(0.0, noise_angle);
      noisy = rotate_basis(clean, phi, rng);
      theta = subspace_subspace_angle(noisy, clean).radians();
    }
    // Clean unit column at a uniformly drawn angle psi to the noisy span.
    const double psi = rng.uniform(0.0, Angle::kMax);
    Vector inside = prev_dim > 0 ? Vector(noisy.columns() * rng.unit_vector(static_cast<Eigen::Index>(prev_dim)))
                                 : Vector::Zero(m);
    Vector outside = rng.gaussian_vector(m);
    outside -= project(noisy, outside);
    outside.normalize();
    const Vector clean_column = std::cos(psi) * inside + std::sin(psi) * outside;
    const Vector observed = clean_column + p.epsilon * rng.unit_vector(m);

    const IndexSet omega = sample_uniform_subset(p.m, d, rng);
    const double residual =
        restricted_residual_norm(noisy, omega, restrict_vector(observed, omega)).norm;
    const double threshold =
        column_threshold(static_cast<std::int64_t>(d), p.m, p.k, p.epsilon, Angle::clamped(theta));
    Outcome o;
    if (residual < threshold) return o;
    o.evaluated = true;
    o.margin = vector_subspace_angle(observed, noisy).radians() -
               (theta + std::sqrt(static_cast<double>(p.k) * p.epsilon));
    o.violated = o.margin < -kCheckTolerance;
    return o;
  });
  const Tally t = tally(outcomes);
  return make_report("conc", CheckKind::kProbabilistic, t, 2.0 * p.delta, seed,
                     {{"m", as_int(p.m)}, {"k", as_int(p.k)}, {"d", as_int(d)},
                      {"epsilon", p.epsilon}, {"delta", p.delta},
                      {"trials_drawn", as_int(trials)}});
}

CheckReport check_ks14(const Ks14Params& p, std::size_t trials, std::uint64_t seed) {
  if (!(p.k >= 1 && p.k < p.m)) throw std::invalid_argument("check_ks14 requires 1 <= k < m");
  if (!(p.delta > 0.0 && p.delta < 1.0)) throw std::invalid_argument("check_ks14 requires 0 < delta < 1");
  if (p.d > p.m) throw std::invalid_argument("check_ks14 requires d <= m");

  // aux: 0 not applicable, 1 lower-bound evaluated, 2 lower-bound violated,
  //      3 unsquared (as printed) upper-bound violated.
  auto outcomes = run_trials(trials, seed, [&](std::size_t, Rng& rng) {
    const OrthonormalBasis basis = random_basis(p.m, p.k, rng);
    const Vector y = rng.gaussian_vector(static_cast<Eigen::Index>(p.m));
    Outcome o;

    // The sample size is fixed before Omega is drawn; the precondition and
    // alpha depend only on (basis, y, d).
    const Ks14Sides pre = ks14_sides(basis, y, IndexSet::full(p.m), p.delta);
    const auto d = p.d != 0 ? static_cast<std::int64_t>(p.d) : pre.d_min;
    if (d < pre.d_min || d > static_cast<std::int64_t>(p.m)) {
      o.aux[0] = 1;
      return o;
    }
    const IndexSet omega = sample_uniform_subset(p.m, static_cast<std::size_t>(d), rng);
    const Ks14Sides s = ks14_sides(basis, y, omega, p.delta);
    if (!(s.alpha < 0.5)) {
      o.aux[0] = 1;
      return o;
    }
    const double tol = kCheckTolerance * std::max(1.0, s.full_sq);
    o.evaluated = true;
    o.margin = s.upper - s.sampled_sq;
    o.violated = o.margin < -tol;
    if (s.zeta_bar < 1.0 / 3.0) {
      o.aux[1] = 1;
      o.aux[2] = s.sampled_sq < s.lower - tol ? 1 : 0;
    }
    const double printed_upper = (1.0 + s.alpha) * static_cast<double>(d) /
                                 static_cast<double>(p.m) * std::sqrt(s.full_sq);
    o.aux[3] = std::sqrt(s.sampled_sq) > printed_upper + tol ? 1 : 0;
    return o;
  });
  const Tally t = tally(outcomes);
  return make_report("ks14", CheckKind::kProbabilistic, t, 2.0 * p.delta, seed,
                     {{"m", as_int(p.m)}, {"k", as_int(p.k)},
                      {"d", p.d == 0 ? ParamValue{std::string("precondition-min")} : ParamValue{as_int(p.d)}},
                      {"delta", p.delta}, {"reading", std::string("squared-norms")},
                      {"not_applicable_trials", t.aux[0]},
                      {"lower_bound_trials", t.aux[1]},
                      {"lower_bound_violations", t.aux[2]},
                      {"printed_form_upper_violations", t.aux[3]}});
}

CheckReport check_matcher(const MatcherParams& p, std::size_t trials, std::uint64_t seed) {
  if (!(p.r >= 1 && p.r <= p.n_dim)) throw std::invalid_argument("check_matcher requires 1 <= r <= n_dim");
  if (!(p.epsilon >= 0.0 && p.epsilon < 1.0)) {
    throw std::invalid_argument("check_matcher requires epsilon in [0, 1)");
  }
  if (p.summands < 1) throw std::invalid_argument("check_matcher requires at least one summand");

  OrthonormalBasis basis = 2 * p.r <= p.n_dim + 1
                               ? fourier_basis(p.n_dim, p.r)
                               : [&] {
                                   Rng rng(seed, Stream::kBasis);
                                   return random_basis(p.n_dim, p.r, rng);
                                 }();
  const DenseMatrix& u = basis.columns();
  const double max_row_sq = u.rowwise().squaredNorm().maxCoeff();
  const double scale = p.l_bound > 0.0 ? p.l_bound / max_row_sq : 1.0;
  const double l = scale * max_row_sq;
  const double rd = static_cast<double>(p.r);
  const double nd = static_cast<double>(p.n_dim);
  const double count = static_cast<double>(p.summands);
  // E[Y] = count * scale / n * I for uniform row sampling; (L/r) I per summand otherwise.
  const double mu_r = p.deterministic ? count * l / rd : count * scale / nd;

  const double base = p.epsilon == 0.0
                          ? 1.0
                          : std::exp(-p.epsilon) / std::pow(1.0 - p.epsilon, 1.0 - p.epsilon);
  const double bound = rd * std::pow(base, mu_r / l);
  const double weaker_bound = rd * std::exp(-mu_r * p.epsilon * p.epsilon / (2.0 * l));

  auto outcomes = run_trials(trials, seed, [&](std::size_t, Rng& rng) {
    const auto rk = static_cast<Eigen::Index>(p.r);
    DenseMatrix y = DenseMatrix::Zero(rk, rk);
    if (p.deterministic) {
      y = DenseMatrix::Identity(rk, rk) * (count * l / rd);
    } else {
      for (std::size_t s = 0; s < p.summands; ++s) {
        const auto j = static_cast<Eigen::Index>(rng.uniform_index(p.n_dim));
        const Vector row = u.row(j).transpose();
        y.noalias() += scale * row * row.transpose();
      }
    }
    const double lambda_r = Eigen::SelfAdjointEigenSolver<DenseMatrix>(y, Eigen::EigenvaluesOnly)
                                .eigenvalues()(0);
    Outcome o;
    o.evaluated = true;
    o.margin = lambda_r - (1.0 - p.epsilon) * mu_r;
    // Relative slack so constant summands never count as failures through roundoff.
    o.violated = o.margin < -kCheckTolerance * std::max(1.0, mu_r);
    return o;
  });
  return make_report("matcher", CheckKind::kProbabilistic, tally(outcomes), bound, seed,
                     {{"n_dim", as_int(p.n_dim)}, {"r", as_int(p.r)},
                      {"summands", as_int(p.summands)}, {"epsilon", p.epsilon},
                      {"L", l}, {"mu_r", mu_r}, {"coherence", coherence(basis)},
                      {"deterministic", p.deterministic},
                      {"vacuous", bound >= 1.0},
                      {"weaker_bound", weaker_bound}});
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{"kcoh", "noisycoh", "ind",     "conc",
                                              "ks14", "matcher",  "ededler", "blum"};
  return names;
}

std::vector<CheckReport> run_checks(const std::vector<std::string>& names, std::size_t trials,
                                    std::uint64_t seed) {
  std::vector<std::string> selected;
  for (const std::string& name : names) {
    if (name == "all") {
      selected = check_names();
      break;
    }
    if (std::find(check_names().begin(), check_names().end(), name) == check_names().end()) {
      throw std::invalid_argument("unknown check '" + name + "'");
    }
    if (std::find(selected.begin(), selected.end(), name) == selected.end()) {
      selected.push_back(name);
    }
  }
  std::vector<CheckReport> reports;
  reports.reserve(selected.size());
  for (const std::string& name : selected) {
    if (name == "kcoh") reports.push_back(check_kcoh({}, trials, seed));
    else if (name == "noisycoh") reports.push_back(check_noisycoh({}, trials, seed));
    else if (name == "ind") reports.push_back(check_ind({}, trials, seed));
    else if (name == "conc") reports.push_back(check_conc({}, trials, seed));
    else if (name == "ks14") reports.push_back(check_ks14({}, trials, seed));
    else if (name == "matcher") reports.push_back(check_matcher({}, trials, seed));
    else if (name == "ededler") reports.push_back(check_ededler({}, trials, seed));
    else if (name == "blum") reports.push_back(check_blum({}, trials, seed));
  }
  return reports;
}

}  // namespace adaptive_mc
