#pragma once

#include <string>
#include <vector>

#include "passmec/action_codec.hpp"
#include "passmec/ppo.hpp"

namespace passmec {

// Versioned binary dump of a trained agent: layer sizes, parameters,
// hyperparameters, discretization schedule, variant name, and the canonical
// action layout tag. Round-trips bit-exactly.
struct Checkpoint {
  static constexpr std::uint32_t kVersion = 1;

  std::string layout_tag;
  std::string variant;
  int observation_size = 0;
  PPOHyper hyper;
  DiscretizationSchedule schedule;

  std::vector<int> policy_sizes;
  std::vector<double> policy_params;
  std::vector<double> log_std;
  std::vector<int> value_sizes;
  std::vector<double> value_params;

  static Checkpoint from_agent(const PpoAgent& agent, const ActionLayout& layout,
                               const std::string& variant, int observation_size,
                               const PPOHyper& hyper, const DiscretizationSchedule& schedule);

  // Rebuilds the agent (optimizer state starts fresh).
  PpoAgent to_agent() const;

  void save(const std::string& path) const;
  static Checkpoint load(const std::string& path);
};

}  // namespace passmec
