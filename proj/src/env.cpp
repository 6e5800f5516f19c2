#include "passmec/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace passmec {

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::kPassMovable: return "pass-movable";
    case Variant::kPassFixed: return "pass-fixed";
    case Variant::kMimo: return "mimo";
  }
  return "unknown";
}

Variant variant_from_name(const std::string& name) {
  if (name == "pass-movable") return Variant::kPassMovable;
  if (name == "pass-fixed") return Variant::kPassFixed;
  if (name == "mimo") return Variant::kMimo;
  throw std::invalid_argument("unknown variant '" + name +
                              "' (expected pass-movable, pass-fixed or mimo)");
}

void EnvConfig::finalize() {
  geometry.finalize();
  profile.validate();
  if (bandwidth_hz <= 0.0 || p_max_watts <= 0.0 || sigma2_watts <= 0.0)
    throw std::invalid_argument("env config: bandwidth, power and noise must be positive");
  if (task_bits <= 0.0) throw std::invalid_argument("env config: task_bits must be positive");
  if (task_bits_random && (task_bits_min <= 0.0 || task_bits_max < task_bits_min))
    throw std::invalid_argument("env config: bad task bits range");
  if (t_qos_seconds <= 0.0 || r_qos < 0.0 || latency_penalty < 0.0 || latency_cap_seconds <= 0.0)
    throw std::invalid_argument("env config: bad latency/reward parameters");
  if (omega_s_per_m < 0.0) throw std::invalid_argument("env config: omega must be >= 0");
  if (steps_per_episode < 1) throw std::invalid_argument("env config: steps_per_episode must be >= 1");
  if (lb_episodes < 1) throw std::invalid_argument("env config: lb_episodes must be >= 1");
}

double reward_from_latencies(const std::vector<double>& latencies, const EnvConfig& cfg) {
  double reward = 0.0;
  for (double t : latencies) {
    if (t <= cfg.t_qos_seconds) reward += cfg.r_qos;
    reward -= cfg.latency_penalty * std::min(t, cfg.latency_cap_seconds);
  }
  return reward;
}

PassMecEnv::PassMecEnv(EnvConfig cfg) : cfg_(std::move(cfg)), rng_(0) {
  cfg_.finalize();
  layout_ = ActionLayout{cfg_.geometry.num_ues, cfg_.geometry.num_waveguides,
                         cfg_.geometry.pas_per_waveguide, cfg_.geometry.ue_antennas};
  schedule_.lb_episodes = cfg_.lb_episodes;
  schedule_.current_episode = 0;
  schedule_.validate();
  even_layout_.x = decode_pa_positions(even_layout_raw(cfg_.geometry), cfg_.geometry);
  mimo_elems_ = mimo_array_positions(cfg_.geometry);
  rng_ = Rng(cfg_.rng_seed);
  reset();
}

std::vector<double> PassMecEnv::reset(std::uint64_t seed) {
  rng_ = Rng(seed);
  return reset();
}

std::vector<double> PassMecEnv::reset() {
  slot_ = 1;
  episode_open_ = true;
  queues_.q_local.assign(cfg_.geometry.num_ues, 0.0);
  queues_.q_bs = 0.0;
  pa_prev_ = even_layout_;
  draw_ue_positions();
  draw_task_bits();
  rebuild_observation_channels();
  return build_observation();
}

void PassMecEnv::draw_ue_positions() {
  const auto& g = cfg_.geometry;
  std::vector<Vec3> centroids;
  if (cfg_.random_walk_mobility && !ue_.centroids.empty()) {
    centroids = ue_.centroids;
    for (auto& c : centroids) {
      c.x = std::clamp(c.x + rng_.uniform(-cfg_.walk_step_m, cfg_.walk_step_m), 0.0, g.region_x_m);
      c.y = std::clamp(c.y + rng_.uniform(-cfg_.walk_step_m, cfg_.walk_step_m), -g.region_y_m / 2.0,
                       g.region_y_m / 2.0);
    }
  } else {
    centroids.resize(g.num_ues);
    for (auto& c : centroids) {
      c.x = rng_.uniform(0.0, g.region_x_m);
      c.y = rng_.uniform(-g.region_y_m / 2.0, g.region_y_m / 2.0);
      c.z = 0.0;
    }
  }
  ue_ = ue_antenna_positions(g, centroids);
}

void PassMecEnv::draw_task_bits() {
  task_bits_.assign(cfg_.geometry.num_ues, cfg_.task_bits);
  if (cfg_.task_bits_random) {
    for (auto& bits : task_bits_) bits = rng_.uniform(cfg_.task_bits_min, cfg_.task_bits_max);
  }
}

ChannelSet PassMecEnv::channels_at(const PAPlacement& pa) const {
  if (cfg_.variant == Variant::kMimo)
    return build_channels_mimo(cfg_.geometry, ue_, mimo_elems_, cfg_.sigma2_watts);
  return build_channels(cfg_.geometry, ue_, pa, cfg_.sigma2_watts);
}

void PassMecEnv::rebuild_observation_channels() { obs_channels_ = channels_at(pa_prev_); }

DecodedAction PassMecEnv::decode(std::span<const double> raw_action) const {
  if (static_cast<int>(raw_action.size()) != layout_.total())
    throw std::invalid_argument("env: action has dimension " +
                                std::to_string(raw_action.size()) + ", expected " +
                                std::to_string(layout_.total()));
  DecodedAction action;
  action.beams = decode_beams(raw_action.subspan(layout_.beam_offset(), layout_.beam_len()),
                              layout_.num_ues, layout_.ue_antennas, cfg_.p_max_watts);
  action.beta = decode_beta(raw_action.subspan(layout_.beta_offset(), layout_.beta_len()));
  switch (cfg_.variant) {
    case Variant::kPassMovable:
      action.pa_x = decode_pa_positions(
          raw_action.subspan(layout_.position_offset(), layout_.position_len()), cfg_.geometry);
      action.assoc = decode_association(
          raw_action.subspan(layout_.assoc_offset(), layout_.assoc_len()),
          layout_.num_waveguides, schedule_);
      break;
    case Variant::kPassFixed:
      action.pa_x = even_layout_.x;
      action.assoc = decode_association(
          raw_action.subspan(layout_.assoc_offset(), layout_.assoc_len()),
          layout_.num_waveguides, schedule_);
      break;
    case Variant::kMimo:
      action.pa_x = even_layout_.x;  // inert, kept for a uniform action record
      action.assoc.assign(layout_.num_ues, 0);
      break;
  }
  return action;
}

PassMecEnv::StepResult PassMecEnv::step(std::span<const double> raw_action) {
  if (!episode_open_) throw std::logic_error("env: episode finished, call reset()");
  DecodedAction action = decode(raw_action);

  double move = 0.0;
  PAPlacement pa_now = pa_prev_;
  if (cfg_.variant == Variant::kPassMovable) {
    pa_now.x = action.pa_x;
    move = movement_delay(pa_prev_, pa_now, cfg_.omega_s_per_m);
  }

  // Rates use the post-move placement within the slot.
  ChannelSet rate_channels = channels_at(pa_now);
  const int num_ues = cfg_.geometry.num_ues;
  std::vector<double> rates(num_ues);
  for (int k = 0; k < num_ues; ++k) {
    double s = cfg_.variant == Variant::kMimo
                   ? sinr_shared(rate_channels, action.beams, k)
                   : sinr(rate_channels, action.assoc, action.beams, k);
    rates[k] = rate_bits_per_s(s, cfg_.bandwidth_hz, num_ues);
  }

  // Latencies from slot-start queues.
  StepInfo info;
  info.per_ue.resize(num_ues);
  std::vector<double> totals(num_ues);
  for (int k = 0; k < num_ues; ++k) {
    auto [t_lq, t_lc] = local_latency(queues_.q_local[k], task_bits_[k], action.beta[k], cfg_.profile);
    OffloadLatency off =
        offload_latency(queues_.q_bs, task_bits_[k], action.beta[k], rates[k], move, cfg_.profile);
    LatencyBreakdown& b = info.per_ue[k];
    b.t_local_queue = t_lq;
    b.t_local_compute = t_lc;
    b.t_off_tx = off.t_tx;
    b.t_off_queue = off.t_queue;
    b.t_off_compute = off.t_compute;
    b.t_move = move;
    b.t_total = total_latency(b);
    totals[k] = b.t_total;
  }
  double reward = reward_from_latencies(totals, cfg_);

  // Advance queues with this slot's split.
  std::vector<double> local_bits(num_ues);
  double offloaded_total = 0.0;
  for (int k = 0; k < num_ues; ++k) {
    local_bits[k] = (1.0 - action.beta[k]) * task_bits_[k];
    offloaded_total += action.beta[k] * task_bits_[k];
  }
  queues_.q_local = step_local_queue(queues_.q_local, local_bits, cfg_.profile);
  queues_.q_bs = step_bs_queue(queues_.q_bs, offloaded_total, cfg_.profile);

  info.task_bits = task_bits_;
  info.beta = action.beta;
  info.assoc = action.assoc;
  info.rate_bits_per_s = rates;
  info.movement_delay_s = move;
  info.reward = reward;

  StepResult result;
  result.reward = reward;
  result.done = slot_ >= cfg_.steps_per_episode;
  result.info = std::move(info);

  pa_prev_ = std::move(pa_now);
  ++slot_;
  if (result.done) episode_open_ = false;
  draw_ue_positions();
  draw_task_bits();
  rebuild_observation_channels();
  result.observation = build_observation();
  return result;
}

int PassMecEnv::observation_size() const {
  const auto& g = cfg_.geometry;
  const int receivers = cfg_.variant == Variant::kMimo ? 1 : g.num_waveguides;
  const int elems = g.pas_per_waveguide;
  return g.num_ues                                     // local queues
         + 1                                           // BS queue
         + g.num_ues                                   // task sizes
         + receivers * elems                           // PA / array element x
         + g.num_ues * g.ue_antennas * 2               // UE antenna x, y
         + g.num_ues * receivers * elems * g.ue_antennas * 2  // H re/im
         + receivers * elems * 2                       // h re/im
         + g.num_ues + 1;                              // CPU speeds
}

std::vector<double> PassMecEnv::build_observation() const {
  const auto& g = cfg_.geometry;
  const bool mimo = cfg_.variant == Variant::kMimo;
  const double local_service = cfg_.profile.local_service_bits();
  const double bs_service = cfg_.profile.bs_service_bits();
  const double channel_scale = g.sqrt_eta() / g.waveguide_height_m;  // max entry magnitude

  std::vector<double> obs;
  obs.reserve(observation_size());
  for (double q : queues_.q_local) obs.push_back(q / local_service);
  obs.push_back(queues_.q_bs / bs_service);
  for (double bits : task_bits_) obs.push_back(bits / local_service);
  if (mimo) {
    for (const auto& e : mimo_elems_) obs.push_back(e.x / g.region_x_m);
  } else {
    for (const auto& row : pa_prev_.x)
      for (double x : row) obs.push_back(x / g.region_x_m);
  }
  for (const auto& ant_row : ue_.antennas) {
    for (const auto& a : ant_row) {
      obs.push_back(a.x / g.region_x_m);
      obs.push_back(a.y / (g.region_y_m / 2.0));
    }
  }
  for (const auto& per_ue : obs_channels_.H) {
    for (const auto& mat : per_ue) {
      for (const cplx& v : mat) {
        obs.push_back(v.real() / channel_scale);
        obs.push_back(v.imag() / channel_scale);
      }
    }
  }
  for (const auto& vec : obs_channels_.h) {
    for (const cplx& v : vec) {
      obs.push_back(v.real());
      obs.push_back(v.imag());
    }
  }
  for (int k = 0; k < g.num_ues; ++k) obs.push_back(cfg_.profile.ue_cpu_hz / cfg_.profile.bs_cpu_hz);
  obs.push_back(1.0);
  return obs;
}

}  // namespace passmec
