#pragma once

#include <cstdint>
#include <vector>

#include "passmec/env.hpp"
#include "passmec/ppo.hpp"

namespace passmec {

struct EpisodeLog {
  int episode = 0;             // 1-based
  double mean_reward = 0.0;    // mean step reward
  double mean_latency_s = 0.0; // per UE per step, capped values
  double qos_fraction = 0.0;
  double mean_q_local_bits = 0.0;
  double mean_q_bs_bits = 0.0;
  double policy_loss = 0.0;    // most recent update
  double value_loss = 0.0;
  double entropy = 0.0;
  int updates = 0;             // cumulative update count
};

struct EvalSummary {
  double mean_reward = 0.0;
  double mean_latency_s = 0.0;
  double qos_fraction = 0.0;
  double mean_q_local_bits = 0.0;
  double mean_q_bs_bits = 0.0;
  int episodes = 0;
};

// On-policy training driver: one environment, one agent, rollouts collected
// across episode boundaries, an update every `batch_size` transitions.
class Trainer {
 public:
  Trainer(const EnvConfig& env_cfg, const PPOHyper& hyper, std::uint64_t seed);

  std::vector<EpisodeLog> run(int episodes);

  PassMecEnv& env() { return env_; }
  PpoAgent& agent() { return agent_; }
  const PpoAgent& agent() const { return agent_; }
  const PPOHyper& hyper() const { return hyper_; }
  int episodes_done() const { return episodes_done_; }

 private:
  EpisodeLog run_episode();

  PassMecEnv env_;
  PPOHyper hyper_;
  PpoAgent agent_;
  RolloutBuffer buffer_;
  Rng rng_;
  int episodes_done_ = 0;
  int updates_done_ = 0;
  UpdateStats last_stats_;
};

// Rolls out the deterministic mean policy (no exploration noise).
EvalSummary evaluate_policy(PassMecEnv& env, const GaussianPolicy& policy, int episodes);

}  // namespace passmec
