#pragma once

// Subcommands of the adaptive_mc tool. Each one is a thin layer over the
// library: it validates flags, calls into adaptive_mc::core and serializes
// the results. All output files are written with shortest round-trip number
// formatting so reruns with the same flags are byte-identical.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adaptive_mc/lrebn.hpp"
#include "adaptive_mc/synthetic.hpp"
#include "adaptive_mc/verify.hpp"

namespace adaptive_mc::cli {

struct InstanceOptions {
  std::size_t m = 60;
  std::size_t n = 80;
  std::size_t r = 4;
  double epsilon = 0.0;
  NoiseMode noise = NoiseMode::kSphere;
  std::optional<std::size_t> spike_index;
  double spike_weight = 0.9;
  std::uint64_t seed = 0;

  CoherenceMode coherence_mode() const;
};

struct AlgorithmOptions {
  std::optional<double> delta;
  std::optional<double> mu_upper;
  bool estimate_mu = false;
  bool angle_cap = true;
  bool budget_cap = true;
  OmegaRedraw omega_redraw = OmegaRedraw::kOnUpdate;
};

/// Everything derived from one run against a known clean matrix.
struct RunEvaluation {
  LrebnConfig config;
  RecoveryResult result;
  std::vector<double> col_error;
  std::vector<double> certificate;  // per column; NaN for fully observed columns
  double max_col_error = 0.0;
  double mean_col_error = 0.0;
  std::size_t certificate_violations = 0;
  /// Basis dimensions beyond r (0 iff the dimension bound held).
  std::size_t bound_violations = 0;
};

LrebnConfig make_config(const AlgorithmOptions& algo, double epsilon, std::size_t r,
                        double default_mu, std::uint64_t seed);

/// Runs LREBN on M through an oracle and scores the output against L.
RunEvaluation evaluate_run(const DenseMatrix& l, const DenseMatrix& m, const LrebnConfig& cfg);

void write_results_csv(std::ostream& out, const RunEvaluation& ev);
void write_summary_csv(std::ostream& out, const RunEvaluation& ev, std::size_t m, std::size_t n);

// ---------------------------------------------------------------------------

int cmd_generate(const InstanceOptions& opts, const std::filesystem::path& out_dir,
                 std::ostream& log);

struct RunOptions {
  std::filesystem::path instance;
  std::filesystem::path out_dir;
  std::optional<double> epsilon;  // defaults to the instance's epsilon
  std::optional<std::size_t> r;   // defaults to the instance's rank
  std::uint64_t seed = 0;
  AlgorithmOptions algo;
};

int cmd_run(const RunOptions& opts, std::ostream& log);

struct SweepOptions {
  std::vector<std::size_t> m{60};
  std::vector<std::size_t> n{80};
  std::vector<std::size_t> r{4};
  std::vector<double> epsilon{0.0};
  std::vector<double> delta{0.05};
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  NoiseMode noise = NoiseMode::kSphere;
  AlgorithmOptions algo;  // delta here is ignored in favour of the grid
};

/// One row per (cell, trial); trial t of every cell uses seed + t for both
/// the instance and the algorithm, matching `generate` + `run` with that seed.
void write_sweep_csv(std::ostream& out, const SweepOptions& opts);
int cmd_sweep(const SweepOptions& opts, const std::optional<std::filesystem::path>& out_path,
              std::ostream& stdout_stream);

struct VerifyOptions {
  std::vector<std::string> names{"all"};
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  /// Overrides of check parameters as key=value ("d=10", "m=500", ...),
  /// applied to every selected check that has that parameter.
  std::vector<std::string> params;
};

std::vector<CheckReport> run_verify(const VerifyOptions& opts);
void write_verify_csv(std::ostream& out, const std::vector<CheckReport>& reports);
std::string params_json(const ParamList& params);
int cmd_verify(const VerifyOptions& opts, const std::optional<std::filesystem::path>& out_path,
               std::ostream& stdout_stream);

}  // namespace adaptive_mc::cli
