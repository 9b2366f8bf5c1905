#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "adaptive_mc/matrix_io.hpp"
#include "adaptive_mc/parallel.hpp"

namespace adaptive_mc::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) { return format_shortest(v); }
std::string num(std::size_t v) { return std::to_string(v); }
std::string flag(bool v) { return v ? "true" : "false"; }

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory " + dir.string());
  }
}

template <class T>
T parse_number(const std::string& text, const std::string& what) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw std::invalid_argument("invalid " + what + " '" + text + "'");
  }
  return value;
}

const std::string& require_key(const KeyValues& kv, const std::string& key, const fs::path& file) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw FormatError(file.string() + ": missing key '" + key + "'");
  return it->second;
}

}  // namespace

CoherenceMode InstanceOptions::coherence_mode() const {
  if (spike_index) return Spiked{*spike_index, spike_weight};
  return Incoherent{};
}

// ---------------------------------------------------------------------------
// Shared run evaluation

LrebnConfig make_config(const AlgorithmOptions& algo, double epsilon, std::size_t r,
                        double default_mu, std::uint64_t seed) {
  LrebnConfig cfg;
  cfg.epsilon = epsilon;
  cfg.r = r;
  if (algo.delta) cfg.delta = *algo.delta;
  cfg.mu_upper = algo.mu_upper.value_or(default_mu);
  cfg.estimate_mu = algo.estimate_mu;
  cfg.angle_cap_enabled = algo.angle_cap;
  cfg.budget_cap_to_m = algo.budget_cap;
  cfg.omega_redraw = algo.omega_redraw;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

RunEvaluation evaluate_run(const DenseMatrix& l, const DenseMatrix& m, const LrebnConfig& cfg) {
  if (l.rows() != m.rows() || l.cols() != m.cols()) {
    throw DimensionError("L and M have different shapes");
  }
  RunEvaluation ev;
  ev.config = cfg;
  ObservationOracle oracle(m);
  ev.result = run_lrebn(oracle, cfg);

  const auto rows = static_cast<std::size_t>(m.rows());
  const auto n = static_cast<std::size_t>(m.cols());
  ev.col_error.resize(n);
  ev.certificate.assign(n, std::numeric_limits<double>::quiet_NaN());
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    const double err = (ev.result.M_tilde.col(col) - l.col(col)).norm();
    ev.col_error[j] = err;
    total += err;
    ev.max_col_error = std::max(ev.max_col_error, err);
    const ColumnRecord& rec = ev.result.columns[j];
    if (rec.mode == ColumnMode::kReconstructed) {
      ev.certificate[j] = theorem_error_bound(rows, rec.d_at_time, rec.k_at_time, cfg.epsilon,
                                              rec.theta_tilde);
      if (err > ev.certificate[j]) ++ev.certificate_violations;
    }
  }
  ev.mean_col_error = n == 0 ? 0.0 : total / static_cast<double>(n);
  ev.bound_violations = ev.result.k_final > cfg.r ? ev.result.k_final - cfg.r : 0;
  return ev;
}

void write_results_csv(std::ostream& out, const RunEvaluation& ev) {
  out << "col_index,mode,k_at_time,d_at_time,theta_tilde,residual,threshold,col_error_vs_L\n";
  for (std::size_t j = 0; j < ev.result.columns.size(); ++j) {
    const ColumnRecord& rec = ev.result.columns[j];
    out << rec.col_index << ',' << to_string(rec.mode) << ',' << rec.k_at_time << ','
        << rec.d_at_time << ',' << num(rec.theta_tilde) << ',' << num(rec.residual) << ','
        << num(rec.threshold) << ',' << num(ev.col_error[j]) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const RunEvaluation& ev, std::size_t m, std::size_t n) {
  out << "m,n,r,epsilon,delta,k_final,observations,max_col_error,mean_col_error,bound_violations\n";
  out << m << ',' << n << ',' << ev.config.r << ',' << num(ev.config.epsilon) << ','
      << num(ev.config.delta) << ',' << ev.result.k_final << ',' << ev.result.observations << ','
      << num(ev.max_col_error) << ',' << num(ev.mean_col_error) << ',' << ev.bound_violations
      << '\n';
}

// ---------------------------------------------------------------------------
// generate

int cmd_generate(const InstanceOptions& opts, const fs::path& out_dir, std::ostream& log) {
  require_valid_epsilon(opts.epsilon);
  const ProblemInstance inst = generate_instance(opts.m, opts.n, opts.r, opts.epsilon,
                                                 opts.coherence_mode(), opts.noise, opts.seed);
  const double mu = coherence(inst.true_basis);

  ensure_directory(out_dir);
  write_matrix_file(out_dir / "L.mat", inst.L);
  write_matrix_file(out_dir / "M.mat", inst.M);
  write_key_values_file(out_dir / "meta",
                        {{"m", num(opts.m)},
                         {"n", num(opts.n)},
                         {"r", num(opts.r)},
                         {"epsilon", num(opts.epsilon)},
                         {"seed", std::to_string(opts.seed)},
                         {"mode", to_string(opts.noise)},
                         {"coherence_mode", to_string(opts.coherence_mode())},
                         {"coherence", format_exact(mu)}});
  log << "coherence " << num(mu) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// run

int cmd_run(const RunOptions& opts, std::ostream& log) {
  const fs::path meta_path = opts.instance / "meta";
  if (!fs::exists(meta_path)) throw std::runtime_error("missing " + meta_path.string());
  const KeyValues meta = read_key_values_file(meta_path);
  const auto m = parse_number<std::size_t>(require_key(meta, "m", meta_path), "m");
  const auto n = parse_number<std::size_t>(require_key(meta, "n", meta_path), "n");
  const double meta_eps = parse_number<double>(require_key(meta, "epsilon", meta_path), "epsilon");
  const auto meta_r = parse_number<std::size_t>(require_key(meta, "r", meta_path), "r");
  double meta_mu = 1.0;
  if (const auto it = meta.find("coherence"); it != meta.end()) {
    meta_mu = parse_number<double>(it->second, "coherence");
  }

  // Validate flags before touching the (possibly large) matrices.
  const LrebnConfig cfg = make_config(opts.algo, opts.epsilon.value_or(meta_eps),
                                      opts.r.value_or(meta_r), meta_mu, opts.seed);

  const DenseMatrix l = read_matrix_file(opts.instance / "L.mat");
  const DenseMatrix mm = read_matrix_file(opts.instance / "M.mat");
  if (static_cast<std::size_t>(mm.rows()) != m || static_cast<std::size_t>(mm.cols()) != n) {
    throw FormatError("M.mat shape does not match meta");
  }
  const RunEvaluation ev = evaluate_run(l, mm, cfg);

  ensure_directory(opts.out_dir);
  {
    auto out = open_output(opts.out_dir / "results.csv");
    write_results_csv(out, ev);
  }
  {
    auto out = open_output(opts.out_dir / "summary.csv");
    write_summary_csv(out, ev, m, n);
  }
  write_key_values_file(opts.out_dir / "manifest",
                        {{"epsilon", num(cfg.epsilon)},
                         {"delta", num(cfg.delta)},
                         {"r", num(cfg.r)},
                         {"mu_upper", format_exact(cfg.mu_upper)},
                         {"estimate_mu", flag(cfg.estimate_mu)},
                         {"seed", std::to_string(cfg.seed)},
                         {"budget_cap_to_m", flag(cfg.budget_cap_to_m)},
                         {"angle_cap_enabled", flag(cfg.angle_cap_enabled)},
                         {"omega_redraw_policy", to_string(cfg.omega_redraw)},
                         {"instance", opts.instance.string()}});
  log << "k_final " << ev.result.k_final << ", observations " << ev.result.observations
      << ", max_col_error " << num(ev.max_col_error) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

void write_sweep_csv(std::ostream& out, const SweepOptions& opts) {
  if (opts.trials < 1) throw std::invalid_argument("trials must be >= 1");
  struct Job {
    std::size_t cell;
    std::size_t m, n, r;
    double epsilon, delta;
    std::size_t trial;
  };
  std::vector<Job> jobs;
  std::size_t cell = 0;
  for (const std::size_t m : opts.m)
    for (const std::size_t n : opts.n)
      for (const std::size_t r : opts.r)
        for (const double eps : opts.epsilon)
          for (const double delta : opts.delta) {
            // Reject the whole grid up front rather than failing mid-run.
            AlgorithmOptions algo = opts.algo;
            algo.delta = delta;
            require_valid_epsilon(eps);
            (void)make_config(algo, eps, r, 1.0, 0);
            for (std::size_t t = 0; t < opts.trials; ++t) jobs.push_back({cell, m, n, r, eps, delta, t});
            ++cell;
          }

  std::vector<std::string> rows(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    const Job& job = jobs[i];
    const std::uint64_t seed = opts.seed + job.trial;
    const ProblemInstance inst =
        generate_instance(job.m, job.n, job.r, job.epsilon, Incoherent{}, opts.noise, seed);
    AlgorithmOptions algo = opts.algo;
    algo.delta = job.delta;
    const LrebnConfig cfg = make_config(algo, job.epsilon, job.r, coherence(inst.true_basis), seed);
    const RunEvaluation ev = evaluate_run(inst.L, inst.M, cfg);
    std::ostringstream row;
    row << job.cell << ',' << job.trial << ',' << seed << ',' << job.m << ',' << job.n << ','
        << job.r << ',' << num(job.epsilon) << ',' << num(job.delta) << ','
        << num(cfg.mu_upper) << ',' << ev.result.observations << ',' << ev.result.k_final
        << ',' << num(ev.max_col_error) << ',' << num(ev.mean_col_error) << ','
        << num(ev.result.theta_final) << ',' << ev.bound_violations << ','
        << ev.certificate_violations << '\n';
    rows[i] = row.str();
  });

  out << "cell,trial,seed,m,n,r,epsilon,delta,mu_upper,observations,k_final,max_col_error,"
         "mean_col_error,theta_final,bound_violations,certificate_violations\n";
  for (const std::string& row : rows) out << row;
}

int cmd_sweep(const SweepOptions& opts, const std::optional<fs::path>& out_path,
              std::ostream& stdout_stream) {
  if (out_path) {
    std::ostringstream buffer;
    write_sweep_csv(buffer, opts);
    if (out_path->has_parent_path()) ensure_directory(out_path->parent_path());
    auto out = open_output(*out_path);
    out << buffer.str();
  } else {
    write_sweep_csv(stdout_stream, opts);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// verify

namespace {

using Overrides = std::map<std::string, std::string>;

Overrides parse_overrides(const std::vector<std::string>& items) {
  Overrides out;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("--param expects key=value, got '" + item + "'");
    }
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw std::invalid_argument("invalid boolean '" + text + "'");
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ';');) out.push_back(parse_number<std::size_t>(part, "list entry"));
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ';');) out.push_back(parse_number<double>(part, "list entry"));
  return out;
}

// Binds override keys to the fields of one parameter struct.
class Binder {
 public:
  explicit Binder(const Overrides& o) : overrides_(o) {}

  void size(const char* key, std::size_t& field) {
    if (auto v = take(key)) field = parse_number<std::size_t>(*v, key);
  }
  void real(const char* key, double& field) {
    if (auto v = take(key)) field = parse_number<double>(*v, key);
  }
  void boolean(const char* key, bool& field) {
    if (auto v = take(key)) field = parse_bool(*v);
  }
  void sizes(const char* key, std::vector<std::size_t>& field) {
    if (auto v = take(key)) field = parse_size_list(*v);
  }
  void reals(const char* key, std::vector<double>& field) {
    if (auto v = take(key)) field = parse_double_list(*v);
  }
  const std::vector<std::string>& used() const { return used_; }

 private:
  std::optional<std::string> take(const char* key) {
    const auto it = overrides_.find(key);
    if (it == overrides_.end()) return std::nullopt;
    used_.emplace_back(key);
    return it->second;
  }
  const Overrides& overrides_;
  std::vector<std::string> used_;
};

}  // namespace

std::vector<CheckReport> run_verify(const VerifyOptions& opts) {
  const Overrides overrides = parse_overrides(opts.params);
  std::vector<std::string> names;
  for (const std::string& name : opts.names) {
    if (name == "all") {
      names = check_names();
      break;
    }
    if (std::find(check_names().begin(), check_names().end(), name) == check_names().end()) {
      throw std::invalid_argument("unknown check '" + name + "'");
    }
    if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
  }

  std::vector<std::string> used;
  std::vector<CheckReport> reports;
  for (const std::string& name : names) {
    Binder b(overrides);
    if (name == "kcoh") {
      KcohParams p;
      b.size("m", p.m), b.size("r", p.r), b.size("k", p.k), b.boolean("spiked", p.spiked);
      b.real("spike_weight", p.spike_weight);
      reports.push_back(check_kcoh(p, opts.trials, opts.seed));
    } else if (name == "noisycoh") {
      NoisycohParams p;
      b.size("m", p.m), b.size("k", p.k), b.real("theta_max", p.theta_max);
      reports.push_back(check_noisycoh(p, opts.trials, opts.seed));
    } else if (name == "ind") {
      IndParams p;
      b.size("k_max", p.k_max), b.real("epsilon", p.epsilon);
      reports.push_back(check_ind(p, opts.trials, opts.seed));
    } else if (name == "conc") {
      ConcParams p;
      b.size("m", p.m), b.size("k", p.k), b.real("epsilon", p.epsilon), b.real("delta", p.delta);
      b.size("d", p.d);
      reports.push_back(check_conc(p, opts.trials, opts.seed));
    } else if (name == "ks14") {
      Ks14Params p;
      b.size("m", p.m), b.size("k", p.k), b.real("delta", p.delta), b.size("d", p.d);
      reports.push_back(check_ks14(p, opts.trials, opts.seed));
    } else if (name == "matcher") {
      MatcherParams p;
      b.size("n_dim", p.n_dim), b.size("r", p.r), b.size("summands", p.summands);
      b.real("epsilon", p.epsilon), b.real("l_bound", p.l_bound);
      b.boolean("deterministic", p.deterministic);
      reports.push_back(check_matcher(p, opts.trials, opts.seed));
    } else if (name == "ededler") {
      EdedlerParams p;
      b.sizes("m_values", p.m_values), b.sizes("r_values", p.r_values);
      b.reals("delta_values", p.delta_values), b.boolean("include_boundary", p.include_boundary);
      reports.push_back(check_ededler(p, opts.trials, opts.seed));
    } else if (name == "blum") {
      BlumParams p;
      b.size("m", p.m), b.size("k", p.k);
      reports.push_back(check_blum(p, opts.trials, opts.seed));
    }
    used.insert(used.end(), b.used().begin(), b.used().end());
  }
  for (const auto& [key, value] : overrides) {
    if (std::find(used.begin(), used.end(), key) == used.end()) {
      throw std::invalid_argument("parameter '" + key + "' does not apply to any selected check");
    }
  }
  return reports;
}

std::string params_json(const ParamList& params) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [key, value] : params) {
    std::visit([&](const auto& v) { j[key] = v; }, value);
  }
  return j.dump();
}

void write_verify_csv(std::ostream& out, const std::vector<CheckReport>& reports) {
  out << "name,trials,violations,violation_rate,theoretical_bound,worst_margin,params_json,seed,"
         "verdict\n";
  for (const CheckReport& rep : reports) {
    // The JSON field contains commas and quotes, so it is quoted RFC-4180 style.
    std::string json = params_json(rep.params);
    std::string quoted = "\"";
    for (const char c : json) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    quoted += '"';
    out << rep.name << ',' << rep.trials << ',' << rep.violations << ','
        << num(rep.violation_rate()) << ',' << num(rep.theoretical_bound) << ','
        << num(rep.worst_margin) << ',' << quoted << ',' << rep.seed << ','
        << to_string(rep.verdict) << '\n';
  }
}

int cmd_verify(const VerifyOptions& opts, const std::optional<fs::path>& out_path,
               std::ostream& stdout_stream) {
  const std::vector<CheckReport> reports = run_verify(opts);
  if (out_path) {
    if (out_path->has_parent_path()) ensure_directory(out_path->parent_path());
    auto out = open_output(*out_path);
    write_verify_csv(out, reports);
  } else {
    write_verify_csv(stdout_stream, reports);
  }
  const bool ok = std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) {
    return r.verdict != Verdict::kFail;
  });
  return ok ? 0 : 1;
}

}  // namespace adaptive_mc::cli
