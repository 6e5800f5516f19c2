#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "passmec/net.hpp"
#include "passmec/policy.hpp"
#include "passmec/rng.hpp"

namespace passmec {

struct PPOHyper {
  double learning_rate = 1e-3;
  bool lr_anneal = true;  // linear decay to zero over the planned run
  double gamma = 0.9;
  double gae_lambda = 0.95;
  double clip_epsilon = 0.2;
  int update_epochs = 10;
  int minibatch_size = 128;
  int batch_size = 512;
  double value_loss_weight = 0.5;
  double entropy_weight = 0.0;  // >0 drifts the clipped-Gaussian std upward
  double max_grad_norm = 0.5;
  std::vector<int> hidden_sizes{64, 128, 64};

  void validate() const;
};

struct Transition {
  std::vector<double> observation;
  std::vector<double> action;
  double log_prob = 0.0;
  double reward = 0.0;
  double value = 0.0;
  bool done = false;
};

// Fixed-capacity on-policy store, cleared after every update.
class RolloutBuffer {
 public:
  explicit RolloutBuffer(int capacity) : capacity_(capacity) { data_.reserve(capacity); }

  void push(Transition t);
  bool full() const { return static_cast<int>(data_.size()) >= capacity_; }
  int size() const { return static_cast<int>(data_.size()); }
  int capacity() const { return capacity_; }
  void clear() { data_.clear(); }
  const std::vector<Transition>& data() const { return data_; }

 private:
  int capacity_;
  std::vector<Transition> data_;
};

struct GaeResult {
  std::vector<double> advantages;      // normalized to zero mean, unit variance
  std::vector<double> advantages_raw;  // before normalization
  std::vector<double> returns;         // raw advantages + values
};

// Generalized advantage estimation with terminal cuts:
//   delta_t = r_t + gamma v_{t+1} (1 - done_t) - v_t
//   A_t     = delta_t + gamma lambda (1 - done_t) A_{t+1}
// `bootstrap_value` stands in for v after the final stored transition.
GaeResult gae(std::span<const double> rewards, std::span<const double> values,
              std::span<const std::uint8_t> dones, double bootstrap_value, double gamma,
              double lambda);

// Actor, critic, and their optimizers, updated together.
struct PpoAgent {
  GaussianPolicy policy;
  DenseNet value_net;
  AdamOptimizer policy_opt;  // mean net parameters
  AdamOptimizer log_std_opt;
  AdamOptimizer value_opt;

  PpoAgent() = default;
  PpoAgent(int obs_dim, int act_dim, const PPOHyper& hyper, Rng& rng);

  double value(std::span<const double> obs) const { return value_net.forward(obs)[0]; }
  // Rebuilds the optimizers (used after loading checkpointed parameters).
  void reset_optimizers(const PPOHyper& hyper);
};

struct UpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double ratio_drift = 0.0;  // mean |ratio - 1| on the batch after the update
  bool aborted = false;      // non-finite loss; parameters were rolled back
  int minibatches = 0;
};

// One full clipped-surrogate update over the buffered batch. The buffer is
// cleared on return.
UpdateStats ppo_update(RolloutBuffer& buffer, PpoAgent& agent, double bootstrap_value,
                       const PPOHyper& hyper, Rng& rng);

}  // namespace passmec
