#include "passmec/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace passmec {

void PPOHyper::validate() const {
  if (learning_rate <= 0.0) throw std::invalid_argument("ppo: learning_rate must be positive");
  if (gamma <= 0.0 || gamma > 1.0) throw std::invalid_argument("ppo: gamma must be in (0, 1]");
  if (gae_lambda <= 0.0 || gae_lambda > 1.0) throw std::invalid_argument("ppo: lambda must be in (0, 1]");
  if (clip_epsilon <= 0.0) throw std::invalid_argument("ppo: clip_epsilon must be positive");
  if (update_epochs < 1 || minibatch_size < 1 || batch_size < 1)
    throw std::invalid_argument("ppo: epochs, minibatch and batch sizes must be >= 1");
  if (minibatch_size > batch_size) throw std::invalid_argument("ppo: minibatch exceeds batch");
  if (value_loss_weight < 0.0 || entropy_weight < 0.0 || max_grad_norm <= 0.0)
    throw std::invalid_argument("ppo: bad loss weights or gradient cap");
  if (hidden_sizes.empty()) throw std::invalid_argument("ppo: need at least one hidden layer");
}

void RolloutBuffer::push(Transition t) {
  if (full()) throw std::logic_error("rollout buffer: push past capacity");
  data_.push_back(std::move(t));
}

GaeResult gae(std::span<const double> rewards, std::span<const double> values,
              std::span<const std::uint8_t> dones, double bootstrap_value, double gamma,
              double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n || dones.size() != n)
    throw std::invalid_argument("gae: length mismatch");
  GaeResult out;
  out.advantages_raw.resize(n);
  double running = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    double not_done = dones[i] ? 0.0 : 1.0;
    double next_value = (i + 1 < n) ? values[i + 1] : bootstrap_value;
    double delta = rewards[i] + gamma * next_value * not_done - values[i];
    running = delta + gamma * lambda * not_done * running;
    out.advantages_raw[i] = running;
  }
  out.returns.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.returns[i] = out.advantages_raw[i] + values[i];

  double mean = 0.0;
  for (double a : out.advantages_raw) mean += a;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double a : out.advantages_raw) var += (a - mean) * (a - mean);
  var /= static_cast<double>(n);
  double sd = std::sqrt(var);
  out.advantages.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.advantages[i] = (out.advantages_raw[i] - mean) / (sd + 1e-8);
  return out;
}

PpoAgent::PpoAgent(int obs_dim, int act_dim, const PPOHyper& hyper, Rng& rng) {
  policy = GaussianPolicy(obs_dim, act_dim, hyper.hidden_sizes, rng);
  std::vector<int> vsizes;
  vsizes.push_back(obs_dim);
  vsizes.insert(vsizes.end(), hyper.hidden_sizes.begin(), hyper.hidden_sizes.end());
  vsizes.push_back(1);
  value_net = DenseNet(vsizes, Activation::kRelu, Activation::kLinear);
  value_net.init_params(rng);
  reset_optimizers(hyper);
}

void PpoAgent::reset_optimizers(const PPOHyper& hyper) {
  policy_opt = AdamOptimizer(policy.mean_net().param_count(), hyper.learning_rate);
  log_std_opt = AdamOptimizer(policy.action_size(), hyper.learning_rate);
  value_opt = AdamOptimizer(value_net.param_count(), hyper.learning_rate);
}

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

struct ParamSnapshot {
  std::vector<double> policy_params;
  std::vector<double> log_std;
  std::vector<double> value_params;
};

ParamSnapshot snapshot(const PpoAgent& agent) {
  return {{agent.policy.mean_net().params().begin(), agent.policy.mean_net().params().end()},
          agent.policy.log_std(),
          {agent.value_net.params().begin(), agent.value_net.params().end()}};
}

void restore(PpoAgent& agent, const ParamSnapshot& snap) {
  std::copy(snap.policy_params.begin(), snap.policy_params.end(),
            agent.policy.mean_net().params().begin());
  agent.policy.log_std() = snap.log_std;
  std::copy(snap.value_params.begin(), snap.value_params.end(),
            agent.value_net.params().begin());
}

}  // namespace

UpdateStats ppo_update(RolloutBuffer& buffer, PpoAgent& agent, double bootstrap_value,
                       const PPOHyper& hyper, Rng& rng) {
  const auto& batch = buffer.data();
  const int n = static_cast<int>(batch.size());
  if (n == 0) throw std::logic_error("ppo_update: empty buffer");

  std::vector<double> rewards(n), values(n);
  std::vector<std::uint8_t> dones(n);
  for (int i = 0; i < n; ++i) {
    rewards[i] = batch[i].reward;
    values[i] = batch[i].value;
    dones[i] = batch[i].done ? 1 : 0;
  }
  GaeResult adv = gae(rewards, values, dones, bootstrap_value, hyper.gamma, hyper.gae_lambda);

  UpdateStats stats;
  ParamSnapshot before = snapshot(agent);

  const int act_dim = agent.policy.action_size();
  std::vector<double> policy_grad(agent.policy.mean_net().param_count());
  std::vector<double> log_std_grad(act_dim);
  std::vector<double> value_grad(agent.value_net.param_count());
  std::vector<double> dmu(act_dim);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;

  DenseNet::Cache policy_cache, value_cache;
  double loss_policy_sum = 0.0, loss_value_sum = 0.0, entropy_sum = 0.0;
  int minibatches = 0;
  bool aborted = false;

  for (int epoch = 0; epoch < hyper.update_epochs && !aborted; ++epoch) {
    // Fisher-Yates with the trainer's deterministic stream.
    for (int i = n - 1; i > 0; --i) {
      int j = static_cast<int>(rng.uniform() * (i + 1));
      std::swap(order[i], order[std::min(j, i)]);
    }
    for (int start = 0; start < n && !aborted; start += hyper.minibatch_size) {
      const int end = std::min(start + hyper.minibatch_size, n);
      const int mb = end - start;
      std::fill(policy_grad.begin(), policy_grad.end(), 0.0);
      std::fill(log_std_grad.begin(), log_std_grad.end(), 0.0);
      std::fill(value_grad.begin(), value_grad.end(), 0.0);

      double mb_policy_loss = 0.0, mb_value_loss = 0.0;
      const double entropy = agent.policy.entropy();

      for (int pos = start; pos < end; ++pos) {
        const Transition& tr = batch[order[pos]];
        const double advantage = adv.advantages[order[pos]];
        const double target = adv.returns[order[pos]];

        std::vector<double> mu = agent.policy.mean_net().forward(tr.observation, policy_cache);
        double lp_new = GaussianPolicy::log_density(mu, agent.policy.log_std(), tr.action);
        double ratio = std::exp(lp_new - tr.log_prob);
        double clipped = std::clamp(ratio, 1.0 - hyper.clip_epsilon, 1.0 + hyper.clip_epsilon);
        double surr1 = ratio * advantage;
        double surr2 = clipped * advantage;
        mb_policy_loss -= std::min(surr1, surr2);

        // d(min)/d(ratio): active branch only; the clipped branch is flat
        // outside the trust band.
        double dmin_dratio;
        if (surr1 <= surr2) {
          dmin_dratio = advantage;
        } else {
          bool inside = ratio > 1.0 - hyper.clip_epsilon && ratio < 1.0 + hyper.clip_epsilon;
          dmin_dratio = inside ? advantage : 0.0;
        }
        double dloss_dlp = -dmin_dratio * ratio / mb;  // loss = -mean(min(...))

        for (int d = 0; d < act_dim; ++d) {
          double sigma = std::exp(agent.policy.log_std()[d]);
          double z = (tr.action[d] - mu[d]) / sigma;
          dmu[d] = dloss_dlp * z / sigma;
          log_std_grad[d] += dloss_dlp * (z * z - 1.0);
        }
        agent.policy.mean_net().backward(policy_cache, dmu, policy_grad);

        std::vector<double> v = agent.value_net.forward(tr.observation, value_cache);
        double diff = v[0] - target;
        mb_value_loss += diff * diff;
        double dv = hyper.value_loss_weight * 2.0 * diff / mb;
        agent.value_net.backward(value_cache, std::span<const double>(&dv, 1), value_grad);
      }
      // Entropy bonus: state-independent, so it contributes a constant pull
      // on every log-std.
      for (int d = 0; d < act_dim; ++d) log_std_grad[d] -= hyper.entropy_weight;

      mb_policy_loss /= mb;
      mb_value_loss /= mb;
      if (!std::isfinite(mb_policy_loss) || !std::isfinite(mb_value_loss)) {
        aborted = true;
        break;
      }

      clip_global_norm(policy_grad, log_std_grad, hyper.max_grad_norm);
      clip_global_norm(value_grad, hyper.max_grad_norm);
      agent.policy_opt.step(agent.policy.mean_net().params(), policy_grad);
      agent.log_std_opt.step(agent.policy.log_std(), log_std_grad);
      agent.policy.clamp_log_std();
      agent.value_opt.step(agent.value_net.params(), value_grad);

      loss_policy_sum += mb_policy_loss;
      loss_value_sum += mb_value_loss;
      entropy_sum += entropy;
      ++minibatches;
    }
  }

  if (aborted) {
    restore(agent, before);
    agent.reset_optimizers(hyper);
  } else if (minibatches > 0) {
    stats.policy_loss = loss_policy_sum / minibatches;
    stats.value_loss = loss_value_sum / minibatches;
    stats.entropy = entropy_sum / minibatches;
  }
  stats.aborted = aborted;
  stats.minibatches = minibatches;

  // Trust-region diagnostic on the whole batch with the updated parameters.
  double drift = 0.0;
  for (const Transition& tr : batch) {
    double lp = agent.policy.log_prob(tr.observation, tr.action);
    drift += std::abs(std::exp(lp - tr.log_prob) - 1.0);
  }
  stats.ratio_drift = drift / n;

  buffer.clear();
  return stats;
}

}  // namespace passmec
