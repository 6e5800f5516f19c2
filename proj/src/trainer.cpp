#include "passmec/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace passmec {

namespace {

struct MetricAccumulator {
  double reward_sum = 0.0;
  double latency_sum = 0.0;
  double qos_hits = 0.0;
  double q_local_sum = 0.0;
  double q_bs_sum = 0.0;
  int steps = 0;
  int ue_samples = 0;

  void add(const PassMecEnv& env, const StepInfo& info, double latency_cap) {
    reward_sum += info.reward;
    for (const auto& b : info.per_ue) {
      latency_sum += std::min(b.t_total, latency_cap);
      if (b.t_total <= env.config().t_qos_seconds) qos_hits += 1.0;
      ++ue_samples;
    }
    double qsum = 0.0;
    for (double q : env.queues().q_local) qsum += q;
    q_local_sum += qsum / env.queues().q_local.size();
    q_bs_sum += env.queues().q_bs;
    ++steps;
  }
};

}  // namespace

Trainer::Trainer(const EnvConfig& env_cfg, const PPOHyper& hyper, std::uint64_t seed)
    : env_([&] {
        EnvConfig cfg = env_cfg;
        Rng seeder(seed);
        cfg.rng_seed = seeder.raw();
        return cfg;
      }()),
      hyper_(hyper),
      buffer_(hyper.batch_size),
      rng_(0) {
  hyper_.validate();
  Rng seeder(seed);
  seeder.raw();  // env stream
  Rng init_rng(seeder.raw());
  agent_ = PpoAgent(env_.observation_size(), env_.action_size(), hyper_, init_rng);
  rng_ = Rng(seeder.raw());

  // Start the position head at the even PA layout (what pass-fixed uses), so
  // repositioning is learned as a deviation from that baseline instead of
  // from a center-clustered ladder. The head is tanh-bounded, so the bias is
  // the pre-activation of the wanted raw value.
  std::vector<double> even_raw = even_layout_raw(env_.config().geometry);
  const ActionLayout& layout = env_.layout();
  std::span<double> params = agent_.policy.mean_net().params();
  const auto& sizes = agent_.policy.mean_net().sizes();
  std::size_t bias_base = params.size() - sizes.back();
  for (int i = 0; i < layout.position_len(); ++i) {
    params[bias_base + layout.position_offset() + i] = std::atanh(even_raw[i]);
  }
  // Position noise is taxed by the movement delay every slot; explore that
  // segment more conservatively than beams and ratios.
  for (int i = 0; i < layout.position_len(); ++i) {
    agent_.policy.log_std()[layout.position_offset() + i] = std::log(0.2);
  }
  // Start the beams at full power with uniform phase. A zero-power start
  // makes every early offload attempt hit the infinite-latency sentinel,
  // which drives the offload head into saturation before the radio is
  // learned.
  const double beam_raw = std::atanh(1.0 / std::sqrt(layout.ue_antennas));
  for (int k = 0; k < layout.num_ues; ++k) {
    for (int l = 0; l < layout.ue_antennas; ++l) {
      params[bias_base + layout.beam_offset() + k * 2 * layout.ue_antennas + 2 * l] = beam_raw;
    }
  }
  // Start the offload ratios below the BS service share (f_b tau / (rho K L)
  // = 0.4 at the default settings). The tanh midpoint (beta = 0.5)
  // oversubscribes the shared BS queue from the first episodes and every
  // UE's offload path drowns in it, which saturates the ratio head at zero
  // before the radio is learned.
  for (int k = 0; k < layout.num_ues; ++k) {
    params[bias_base + layout.beta_offset() + k] = std::atanh(2.0 * 0.25 - 1.0);
  }
}

std::vector<EpisodeLog> Trainer::run(int episodes) {
  std::vector<EpisodeLog> log;
  log.reserve(episodes);
  for (int e = 0; e < episodes; ++e) {
    if (hyper_.lr_anneal) {
      double lr = hyper_.learning_rate * (1.0 - static_cast<double>(e) / episodes);
      agent_.policy_opt.set_learning_rate(lr);
      agent_.log_std_opt.set_learning_rate(lr);
      agent_.value_opt.set_learning_rate(lr);
    }
    log.push_back(run_episode());
  }
  return log;
}

EpisodeLog Trainer::run_episode() {
  env_.set_episode_index(episodes_done_);
  std::vector<double> obs = env_.reset();
  MetricAccumulator acc;

  bool done = false;
  while (!done) {
    GaussianPolicy::Sample sample = agent_.policy.sample(obs, rng_);
    double value = agent_.value(obs);
    PassMecEnv::StepResult res = env_.step(sample.action);
    done = res.done;

    Transition tr;
    tr.observation = std::move(obs);
    tr.action = std::move(sample.action);
    tr.log_prob = sample.log_prob;
    tr.reward = res.reward;
    tr.value = value;
    tr.done = res.done;
    // The horizon end is a time limit, not a terminal state: the network
    // keeps operating. Fold the tail value into the final reward so the
    // critic learns the stationary continuing value instead of a
    // slot-position-dependent one (the observation carries no slot index).
    if (res.done) tr.reward += hyper_.gamma * agent_.value(res.observation);
    buffer_.push(std::move(tr));

    obs = std::move(res.observation);
    acc.add(env_, res.info, env_.config().latency_cap_seconds);

    if (buffer_.full()) {
      double bootstrap = agent_.value(obs);
      last_stats_ = ppo_update(buffer_, agent_, bootstrap, hyper_, rng_);
      ++updates_done_;
    }
  }

  ++episodes_done_;
  EpisodeLog row;
  row.episode = episodes_done_;
  row.mean_reward = acc.reward_sum / acc.steps;
  row.mean_latency_s = acc.latency_sum / acc.ue_samples;
  row.qos_fraction = acc.qos_hits / acc.ue_samples;
  row.mean_q_local_bits = acc.q_local_sum / acc.steps;
  row.mean_q_bs_bits = acc.q_bs_sum / acc.steps;
  row.policy_loss = last_stats_.policy_loss;
  row.value_loss = last_stats_.value_loss;
  row.entropy = last_stats_.entropy;
  row.updates = updates_done_;
  return row;
}

EvalSummary evaluate_policy(PassMecEnv& env, const GaussianPolicy& policy, int episodes) {
  if (episodes < 1) throw std::invalid_argument("evaluate: episodes must be >= 1");
  if (policy.observation_size() != env.observation_size() ||
      policy.action_size() != env.action_size())
    throw std::invalid_argument("evaluate: policy dimensions do not match the environment");

  MetricAccumulator acc;
  for (int e = 0; e < episodes; ++e) {
    std::vector<double> obs = env.reset();
    bool done = false;
    while (!done) {
      std::vector<double> action = policy.mean(obs);
      PassMecEnv::StepResult res = env.step(action);
      done = res.done;
      obs = std::move(res.observation);
      acc.add(env, res.info, env.config().latency_cap_seconds);
    }
  }
  EvalSummary out;
  out.mean_reward = acc.reward_sum / acc.steps;
  out.mean_latency_s = acc.latency_sum / acc.ue_samples;
  out.qos_fraction = acc.qos_hits / acc.ue_samples;
  out.mean_q_local_bits = acc.q_local_sum / acc.steps;
  out.mean_q_bs_bits = acc.q_bs_sum / acc.steps;
  out.episodes = episodes;
  return out;
}

}  // namespace passmec
