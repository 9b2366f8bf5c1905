// adaptive_mc: generate instances, run LREBN, sweep grids, verify lemmas.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace cli = adaptive_mc::cli;

namespace {

void add_algorithm_flags(CLI::App* cmd, cli::AlgorithmOptions& algo, std::string& redraw,
                         bool with_delta) {
  if (with_delta) cmd->add_option("--delta", algo.delta, "Failure probability, 0 < delta < 0.1");
  cmd->add_option("--mu-upper", algo.mu_upper,
                  "Coherence bound fed to the budget (default: coherence of the true basis)");
  cmd->add_flag("--estimate-mu", algo.estimate_mu,
                "Heuristic: replace mu-upper by 2 coherence(basis) k / r after each update");
  cmd->add_flag("!--no-angle-cap", algo.angle_cap, "Disable the (3pi/2) sqrt(k eps) angle cap");
  cmd->add_flag("!--no-budget-cap", algo.budget_cap, "Do not clamp the budget to m");
  cmd->add_option("--omega-redraw", redraw, "Sampling pattern redraw policy")
      ->check(CLI::IsMember({"on-update", "per-column"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive low-rank matrix completion under bounded noise"};
  app.require_subcommand(1);

  // generate
  cli::InstanceOptions gen;
  std::string gen_out;
  std::string gen_noise = "sphere";
  std::optional<std::size_t> spike_index;
  auto* generate = app.add_subcommand("generate", "Write a synthetic instance directory");
  generate->add_option("--m", gen.m, "Rows")->check(CLI::PositiveNumber);
  generate->add_option("--n", gen.n, "Columns")->check(CLI::PositiveNumber);
  generate->add_option("--r", gen.r, "Rank")->check(CLI::PositiveNumber);
  generate->add_option("--epsilon", gen.epsilon, "Per-column noise bound, < 0.25");
  generate->add_option("--noise-mode", gen_noise, "sphere or scaled-gaussian")
      ->check(CLI::IsMember({"sphere", "scaled-gaussian"}));
  generate->add_option("--spike-index", spike_index, "Blend the first basis direction toward e_i");
  generate->add_option("--spike-weight", gen.spike_weight, "Blend weight in [0, 1]");
  generate->add_option("--seed", gen.seed, "Seed");
  generate->add_option("--out", gen_out, "Output directory")->required();

  // run
  cli::RunOptions run;
  std::string run_redraw = "on-update";
  std::string run_instance;
  std::string run_out;
  auto* run_cmd = app.add_subcommand("run", "Run LREBN on an instance directory");
  run_cmd->add_option("--instance", run_instance, "Instance directory from generate")->required();
  run_cmd->add_option("--out", run_out, "Output directory")->required();
  run_cmd->add_option("--epsilon", run.epsilon, "Noise bound (default: from meta)");
  run_cmd->add_option("--r", run.r, "Rank bound (default: from meta)");
  run_cmd->add_option("--seed", run.seed, "Seed for the sampling pattern");
  add_algorithm_flags(run_cmd, run.algo, run_redraw, true);

  // sweep
  cli::SweepOptions sweep;
  std::string sweep_redraw = "on-update";
  std::string sweep_noise = "sphere";
  std::optional<std::string> sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "Long-format CSV over a parameter grid");
  sweep_cmd->add_option("--m", sweep.m, "Rows (comma list)")->delimiter(',');
  sweep_cmd->add_option("--n", sweep.n, "Columns (comma list)")->delimiter(',');
  sweep_cmd->add_option("--r", sweep.r, "Rank (comma list)")->delimiter(',');
  sweep_cmd->add_option("--epsilon", sweep.epsilon, "Noise bound (comma list)")->delimiter(',');
  sweep_cmd->add_option("--delta", sweep.delta, "Failure probability (comma list)")->delimiter(',');
  sweep_cmd->add_option("--trials", sweep.trials, "Trials per cell")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", sweep.seed, "Base seed; trial t uses seed + t");
  sweep_cmd->add_option("--noise-mode", sweep_noise, "sphere or scaled-gaussian")
      ->check(CLI::IsMember({"sphere", "scaled-gaussian"}));
  sweep_cmd->add_option("--out", sweep_out, "Output CSV (default: stdout)");
  add_algorithm_flags(sweep_cmd, sweep.algo, sweep_redraw, false);

  // verify
  cli::VerifyOptions verify;
  std::optional<std::string> verify_out;
  auto* verify_cmd = app.add_subcommand("verify", "Run the lemma verification suite");
  verify_cmd->add_option("--names", verify.names, "Checks to run, or 'all'")->delimiter(',');
  verify_cmd->add_option("--trials", verify.trials, "Trials per check");
  verify_cmd->add_option("--seed", verify.seed, "Seed");
  verify_cmd->add_option("--param", verify.params, "Check parameter override key=value");
  verify_cmd->add_option("--out", verify_out, "Output CSV (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) {
      gen.noise = adaptive_mc::parse_noise_mode(gen_noise);
      gen.spike_index = spike_index;
      return cli::cmd_generate(gen, gen_out, std::cout);
    }
    if (run_cmd->parsed()) {
      run.instance = run_instance;
      run.out_dir = run_out;
      run.algo.omega_redraw = adaptive_mc::parse_omega_redraw(run_redraw);
      return cli::cmd_run(run, std::cout);
    }
    if (sweep_cmd->parsed()) {
      sweep.noise = adaptive_mc::parse_noise_mode(sweep_noise);
      sweep.algo.omega_redraw = adaptive_mc::parse_omega_redraw(sweep_redraw);
      std::optional<std::filesystem::path> out;
      if (sweep_out) out = *sweep_out;
      return cli::cmd_sweep(sweep, out, std::cout);
    }
    if (verify_cmd->parsed()) {
      std::optional<std::filesystem::path> out;
      if (verify_out) out = *verify_out;
      return cli::cmd_verify(verify, out, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
