#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "passmec/action_codec.hpp"
#include "passmec/channel.hpp"
#include "passmec/geometry.hpp"
#include "passmec/queueing.hpp"
#include "passmec/rng.hpp"

namespace passmec {

enum class Variant {
  kPassMovable,  // full decode, PAs reposition every slot
  kPassFixed,    // PAs pinned to the even layout, position segment inert
  kMimo,         // single shared receive array, association segment inert
};

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct EnvConfig {
  SystemGeometry geometry;
  ComputeProfile profile;

  double bandwidth_hz = 1.0e7;
  double p_max_watts = 0.1;       // 20 dBm
  double sigma2_watts = 1.0e-12;  // -90 dBm

  double task_bits = 2.0e7;  // per UE per slot
  bool task_bits_random = false;
  double task_bits_min = 1.0e7;
  double task_bits_max = 3.0e7;

  double t_qos_seconds = 2.0;
  double r_qos = 1.0;
  double latency_penalty = 1.0;         // phi
  double latency_cap_seconds = 10.0;    // cap on the per-UE penalty term
  double omega_s_per_m = 0.01;          // PA movement cost

  int steps_per_episode = 30;
  Variant variant = Variant::kPassMovable;
  std::uint64_t rng_seed = 1;

  bool random_walk_mobility = false;  // default: i.i.d. uniform redraw per slot
  double walk_step_m = 1.0;

  int lb_episodes = 400;  // association discretization anneal length

  void finalize();  // fills geometry defaults, validates everything
};

// Per-step diagnostics, also serialized through the C API as JSON.
struct StepInfo {
  std::vector<LatencyBreakdown> per_ue;
  std::vector<double> task_bits;
  std::vector<double> beta;
  std::vector<int> assoc;
  std::vector<double> rate_bits_per_s;
  double movement_delay_s = 0.0;
  double reward = 0.0;
};

// QoS bonus for every served UE minus the latency penalty, with per-UE
// latency capped so undeliverable offloads stay finite:
//   sum_{t_k <= t_qos} r_qos - phi * sum_k min(t_k, cap)
double reward_from_latencies(const std::vector<double>& latencies, const EnvConfig& cfg);

// Episodic slot-by-slot simulator. One instance is single-owner sequential;
// run several instances with distinct seeds for parallel collection.
class PassMecEnv {
 public:
  explicit PassMecEnv(EnvConfig cfg);

  // Starts a fresh episode: slot 1, zero queues, uniform UE centroids, PAs on
  // the even layout. Without a seed the internal stream continues.
  std::vector<double> reset();
  std::vector<double> reset(std::uint64_t seed);

  struct StepResult {
    std::vector<double> observation;
    double reward = 0.0;
    bool done = false;
    StepInfo info;
  };

  StepResult step(std::span<const double> raw_action);

  // Decode as this variant would (positions/association segments may be inert).
  DecodedAction decode(std::span<const double> raw_action) const;

  int observation_size() const;
  int action_size() const { return layout_.total(); }
  const ActionLayout& layout() const { return layout_; }
  const EnvConfig& config() const { return cfg_; }

  // Episode index drives the load-balancing anneal.
  void set_episode_index(int episode) { schedule_.current_episode = episode; }
  const DiscretizationSchedule& schedule() const { return schedule_; }
  void set_schedule(const DiscretizationSchedule& s) { schedule_ = s; }

  int slot() const { return slot_; }
  const QueueState& queues() const { return queues_; }
  const UEPlacement& ue_placement() const { return ue_; }
  const PAPlacement& pa_positions() const { return pa_prev_; }

 private:
  void draw_ue_positions();
  void draw_task_bits();
  void rebuild_observation_channels();
  std::vector<double> build_observation() const;
  ChannelSet channels_at(const PAPlacement& pa) const;

  EnvConfig cfg_;
  ActionLayout layout_;
  DiscretizationSchedule schedule_;
  Rng rng_;

  int slot_ = 1;
  bool episode_open_ = false;
  QueueState queues_;
  UEPlacement ue_;
  PAPlacement pa_prev_;
  PAPlacement even_layout_;
  std::vector<Vec3> mimo_elems_;
  std::vector<double> task_bits_;
  ChannelSet obs_channels_;
};

}  // namespace passmec
