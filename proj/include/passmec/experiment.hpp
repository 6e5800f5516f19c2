#pragma once

#include <optional>
#include <string>
#include <vector>

#include "passmec/config.hpp"
#include "passmec/trainer.hpp"

namespace passmec {

// One CSV row of the training or evaluation output. sweep_value is "na" for
// plain (non-sweep) runs.
struct MetricsRow {
  std::string variant;
  std::uint64_t seed = 0;
  int episode = 0;
  std::string sweep_value = "na";
  double mean_reward = 0.0;
  double mean_latency_s = 0.0;
  double qos_fraction = 0.0;
  double mean_q_local_bits = 0.0;
  double mean_q_bs_bits = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
};

// Fixed, documented training-CSV schema.
extern const char* kTrainingCsvHeader;
std::string format_metrics_row(const MetricsRow& row);
MetricsRow parse_metrics_row(const std::string& line);

struct RunResult {
  std::string variant;
  std::uint64_t seed = 0;
  std::string sweep_value;   // "na" when not sweeping
  std::string csv_path;
  std::string checkpoint_path;
  EvalSummary eval;
};

// Trains every (variant, seed) pair of the spec, writing one training-curve
// CSV and one final checkpoint per run. Deterministic per run under fixed
// seeds; independent runs execute in parallel threads.
std::vector<RunResult> run_training(const ExperimentSpec& spec);

struct SweepSummaryRow {
  std::string sweep_axis;
  std::string sweep_value;
  std::string variant;
  int num_seeds = 0;
  double mean_latency_s = 0.0;
  double std_latency_s = 0.0;
  double mean_reward = 0.0;
  double qos_fraction = 0.0;
};

// Trains and evaluates across the sweep axis, then reduces to one summary row
// per (sweep value, variant). Returns the rows; also writes
// <output_dir>/sweep_summary.csv.
std::vector<SweepSummaryRow> run_sweep(const ExperimentSpec& spec);

// Deterministic-mean-policy evaluation of a stored checkpoint against a
// config. Rejects dimension mismatches with a message naming both sides.
EvalSummary evaluate_checkpoint(const std::string& checkpoint_path, const EnvConfig& env_cfg,
                                int episodes, std::uint64_t seed);

// Applies one sweep point to a config (UE count or transmit power).
EnvConfig apply_sweep_value(const EnvConfig& base, SweepAxis axis, double value);

}  // namespace passmec
