#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "passmec/env.hpp"
#include "passmec/ppo.hpp"

namespace passmec {

enum class SweepAxis { kNone, kUeCount, kPower };

SweepAxis sweep_axis_from_name(const std::string& name);
const char* sweep_axis_name(SweepAxis axis);

// Everything one training/evaluation campaign needs: the base environment,
// the optimizer settings, and the run matrix (variants x seeds x sweep).
struct ExperimentSpec {
  EnvConfig env;
  PPOHyper ppo;

  int episodes = 2000;
  int eval_episodes = 100;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::vector<Variant> variants{Variant::kPassMovable, Variant::kPassFixed, Variant::kMimo};
  SweepAxis sweep = SweepAxis::kNone;
  std::vector<int> sweep_ue_counts{5, 6, 7, 8, 9};
  std::vector<double> sweep_power_dbm{10.0, 15.0, 20.0, 25.0};
  std::string output_dir = "runs";
  int max_parallel = 0;  // 0 -> hardware concurrency

  void validate() const;
};

double dbm_to_watts(double dbm);

// Parses a JSON experiment spec. Absent fields keep their defaults; unknown
// keys are rejected so typos fail loudly. Throws std::invalid_argument with
// the offending path.
ExperimentSpec parse_experiment_spec(const std::string& json_text);

// The full default spec as a JSON document (all gap-filling constants spelled
// out explicitly).
std::string default_spec_json();

}  // namespace passmec
