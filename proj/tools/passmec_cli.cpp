// passmec command-line front end. Talks to the core exclusively through the
// C API in passmec.h.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "passmec.h"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw CLI::ValidationError("--config", "cannot read " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

int fail(pm_status status, const char* what) {
  std::cerr << "error: " << what << ": " << pm_status_name(status) << ": " << pm_last_error()
            << "\n";
  return 1;
}

struct ExperimentHandle {
  pm_experiment* ptr = nullptr;
  ~ExperimentHandle() { pm_experiment_destroy(ptr); }
};

pm_status make_experiment(const std::string& config_path, ExperimentHandle& handle) {
  std::string config_text;
  if (config_path.empty()) {
    char* defaults = pm_default_config_json();
    config_text = defaults;
    pm_string_free(defaults);
  } else {
    config_text = read_file(config_path);
  }
  return pm_experiment_create(config_text.c_str(), &handle.ptr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PASS-enhanced MEC simulator and latency-minimization trainer"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string variant;
  std::vector<std::uint64_t> seeds;
  int episodes = 0;
  int eval_episodes = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config JSON (built-in defaults if omitted)");
    cmd->add_option("--out", out_dir, "output directory for CSVs and checkpoints");
    cmd->add_option("--seed", seeds, "seed (repeatable; replaces the config's seed list)");
    cmd->add_option("--episodes", episodes, "training episodes");
    cmd->add_option("--variant", variant, "pass-movable | pass-fixed | mimo");
  };

  CLI::App* train = app.add_subcommand("train", "train one run per (variant, seed)");
  add_common(train);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "train and evaluate across a sweep axis");
  add_common(sweep_cmd);
  std::string sweep_axis;
  sweep_cmd->add_option("--sweep", sweep_axis, "ues | power")->required();

  CLI::App* eval_cmd = app.add_subcommand("evaluate", "roll out a checkpoint with the mean policy");
  std::string checkpoint_path;
  eval_cmd->add_option("checkpoint", checkpoint_path, "checkpoint file")->required();
  eval_cmd->add_option("--config", config_path, "experiment config JSON");
  eval_cmd->add_option("--episodes", eval_episodes, "evaluation episodes (default 100)");
  std::uint64_t eval_seed = 1;
  eval_cmd->add_option("--seed", eval_seed, "evaluation environment seed");

  CLI::App* defaults_cmd =
      app.add_subcommand("print-config", "print the built-in default config JSON");

  CLI11_PARSE(app, argc, argv);

  if (defaults_cmd->parsed()) {
    char* text = pm_default_config_json();
    std::fputs(text, stdout);
    pm_string_free(text);
    return 0;
  }

  if (eval_cmd->parsed()) {
    std::string config_text;
    if (config_path.empty()) {
      char* defaults = pm_default_config_json();
      config_text = defaults;
      pm_string_free(defaults);
    } else {
      config_text = read_file(config_path);
    }
    pm_eval_summary summary{};
    pm_status st = pm_evaluate_checkpoint(checkpoint_path.c_str(), config_text.c_str(),
                                          eval_episodes > 0 ? eval_episodes : 100, eval_seed,
                                          &summary);
    if (st != PM_OK) return fail(st, "evaluate");
    std::printf("episodes,mean_reward,mean_latency_s,qos_fraction,mean_q_local_bits,mean_q_bs_bits\n");
    std::printf("%d,%.10g,%.10g,%.10g,%.10g,%.10g\n", summary.episodes, summary.mean_reward,
                summary.mean_latency_s, summary.qos_fraction, summary.mean_q_local_bits,
                summary.mean_q_bs_bits);
    return 0;
  }

  ExperimentHandle exp;
  pm_status st = make_experiment(config_path, exp);
  if (st != PM_OK) return fail(st, "config");

  if (!out_dir.empty() && (st = pm_experiment_set_output_dir(exp.ptr, out_dir.c_str())) != PM_OK)
    return fail(st, "--out");
  if (episodes > 0 && (st = pm_experiment_set_episodes(exp.ptr, episodes)) != PM_OK)
    return fail(st, "--episodes");
  if (!seeds.empty() &&
      (st = pm_experiment_set_seeds(exp.ptr, seeds.data(), static_cast<int>(seeds.size()))) != PM_OK)
    return fail(st, "--seed");
  if (!variant.empty() && (st = pm_experiment_set_variant(exp.ptr, variant.c_str())) != PM_OK)
    return fail(st, "--variant");

  if (train->parsed()) {
    st = pm_experiment_run_training(exp.ptr);
    if (st != PM_OK) return fail(st, "train");
    std::puts("training complete");
    return 0;
  }

  if (sweep_cmd->parsed()) {
    if ((st = pm_experiment_set_sweep(exp.ptr, sweep_axis.c_str())) != PM_OK)
      return fail(st, "--sweep");
    st = pm_experiment_run_sweep(exp.ptr);
    if (st != PM_OK) return fail(st, "sweep");
    std::puts("sweep complete");
    return 0;
  }

  return 0;
}
