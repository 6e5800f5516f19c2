#include "passmec/config.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace passmec {

using nlohmann::json;

SweepAxis sweep_axis_from_name(const std::string& name) {
  if (name == "none") return SweepAxis::kNone;
  if (name == "ues") return SweepAxis::kUeCount;
  if (name == "power") return SweepAxis::kPower;
  throw std::invalid_argument("unknown sweep axis '" + name + "' (expected none, ues or power)");
}

const char* sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kNone: return "none";
    case SweepAxis::kUeCount: return "ues";
    case SweepAxis::kPower: return "power";
  }
  return "none";
}

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

void ExperimentSpec::validate() const {
  ppo.validate();
  if (episodes < 1) throw std::invalid_argument("experiment: episodes must be >= 1");
  if (eval_episodes < 1) throw std::invalid_argument("experiment: eval_episodes must be >= 1");
  if (seeds.empty()) throw std::invalid_argument("experiment: seeds list must not be empty");
  std::set<std::uint64_t> unique(seeds.begin(), seeds.end());
  if (unique.size() != seeds.size())
    throw std::invalid_argument("experiment: seeds must be distinct");
  if (variants.empty()) throw std::invalid_argument("experiment: variants list must not be empty");
  if (sweep == SweepAxis::kUeCount && sweep_ue_counts.empty())
    throw std::invalid_argument("experiment: empty UE-count sweep list");
  if (sweep == SweepAxis::kPower && sweep_power_dbm.empty())
    throw std::invalid_argument("experiment: empty power sweep list");
  if (output_dir.empty()) throw std::invalid_argument("experiment: output_dir must not be empty");
  EnvConfig check = env;
  check.finalize();
}

namespace {

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key()))
      throw std::invalid_argument("config: unknown key '" + where + "." + it.key() + "'");
  }
}

template <typename T>
void get_to(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) obj.at(key).get_to(out);
}

void parse_geometry(const json& j, SystemGeometry& g) {
  reject_unknown(j, "geometry",
                 {"region_x_m", "region_y_m", "waveguide_height_m", "num_waveguides",
                  "pas_per_waveguide", "num_ues", "ue_antennas", "antenna_spacing_m",
                  "carrier_hz", "refractive_index", "light_speed_m_s", "waveguide_y"});
  get_to(j, "region_x_m", g.region_x_m);
  get_to(j, "region_y_m", g.region_y_m);
  get_to(j, "waveguide_height_m", g.waveguide_height_m);
  get_to(j, "num_waveguides", g.num_waveguides);
  get_to(j, "pas_per_waveguide", g.pas_per_waveguide);
  get_to(j, "num_ues", g.num_ues);
  get_to(j, "ue_antennas", g.ue_antennas);
  get_to(j, "antenna_spacing_m", g.antenna_spacing_m);
  get_to(j, "carrier_hz", g.carrier_hz);
  get_to(j, "refractive_index", g.refractive_index);
  get_to(j, "light_speed_m_s", g.light_speed_m_s);
  get_to(j, "waveguide_y", g.waveguide_y);
}

void parse_env(const json& j, EnvConfig& env) {
  reject_unknown(j, "env",
                 {"geometry", "compute", "radio", "tasks", "latency", "mobility", "episode"});
  if (j.contains("geometry")) parse_geometry(j.at("geometry"), env.geometry);
  if (j.contains("compute")) {
    const json& c = j.at("compute");
    reject_unknown(c, "env.compute", {"ue_cpu_hz", "bs_cpu_hz", "cycles_per_bit", "slot_seconds"});
    get_to(c, "ue_cpu_hz", env.profile.ue_cpu_hz);
    get_to(c, "bs_cpu_hz", env.profile.bs_cpu_hz);
    get_to(c, "cycles_per_bit", env.profile.cycles_per_bit);
    get_to(c, "slot_seconds", env.profile.slot_seconds);
  }
  if (j.contains("radio")) {
    const json& r = j.at("radio");
    reject_unknown(r, "env.radio", {"bandwidth_hz", "max_tx_power_dbm", "noise_power_dbm"});
    get_to(r, "bandwidth_hz", env.bandwidth_hz);
    if (r.contains("max_tx_power_dbm")) env.p_max_watts = dbm_to_watts(r.at("max_tx_power_dbm").get<double>());
    if (r.contains("noise_power_dbm")) env.sigma2_watts = dbm_to_watts(r.at("noise_power_dbm").get<double>());
  }
  if (j.contains("tasks")) {
    const json& t = j.at("tasks");
    reject_unknown(t, "env.tasks", {"bits_per_slot", "randomize", "bits_range"});
    get_to(t, "bits_per_slot", env.task_bits);
    get_to(t, "randomize", env.task_bits_random);
    if (t.contains("bits_range")) {
      auto range = t.at("bits_range").get<std::vector<double>>();
      if (range.size() != 2) throw std::invalid_argument("config: tasks.bits_range needs two values");
      env.task_bits_min = range[0];
      env.task_bits_max = range[1];
    }
  }
  if (j.contains("latency")) {
    const json& l = j.at("latency");
    reject_unknown(l, "env.latency",
                   {"qos_seconds", "qos_reward", "penalty_per_second",
                    "reward_latency_cap_seconds", "movement_s_per_m"});
    get_to(l, "qos_seconds", env.t_qos_seconds);
    get_to(l, "qos_reward", env.r_qos);
    get_to(l, "penalty_per_second", env.latency_penalty);
    get_to(l, "reward_latency_cap_seconds", env.latency_cap_seconds);
    get_to(l, "movement_s_per_m", env.omega_s_per_m);
  }
  if (j.contains("mobility")) {
    const json& m = j.at("mobility");
    reject_unknown(m, "env.mobility", {"random_walk", "walk_step_m"});
    get_to(m, "random_walk", env.random_walk_mobility);
    get_to(m, "walk_step_m", env.walk_step_m);
  }
  if (j.contains("episode")) {
    const json& e = j.at("episode");
    reject_unknown(e, "env.episode", {"steps"});
    get_to(e, "steps", env.steps_per_episode);
  }
}

void parse_ppo(const json& j, PPOHyper& h, EnvConfig& env) {
  reject_unknown(j, "ppo",
                 {"learning_rate", "lr_anneal", "gamma", "gae_lambda", "clip_epsilon", "update_epochs",
                  "minibatch_size", "batch_size", "value_loss_weight", "entropy_weight",
                  "max_grad_norm", "hidden_sizes", "lb_episodes"});
  get_to(j, "learning_rate", h.learning_rate);
  get_to(j, "lr_anneal", h.lr_anneal);
  get_to(j, "gamma", h.gamma);
  get_to(j, "gae_lambda", h.gae_lambda);
  get_to(j, "clip_epsilon", h.clip_epsilon);
  get_to(j, "update_epochs", h.update_epochs);
  get_to(j, "minibatch_size", h.minibatch_size);
  get_to(j, "batch_size", h.batch_size);
  get_to(j, "value_loss_weight", h.value_loss_weight);
  get_to(j, "entropy_weight", h.entropy_weight);
  get_to(j, "max_grad_norm", h.max_grad_norm);
  get_to(j, "hidden_sizes", h.hidden_sizes);
  get_to(j, "lb_episodes", env.lb_episodes);
}

void parse_experiment(const json& j, ExperimentSpec& spec) {
  reject_unknown(j, "experiment",
                 {"episodes", "eval_episodes", "seeds", "variants", "sweep", "sweep_ue_counts",
                  "sweep_power_dbm", "output_dir", "max_parallel"});
  get_to(j, "episodes", spec.episodes);
  get_to(j, "eval_episodes", spec.eval_episodes);
  get_to(j, "seeds", spec.seeds);
  if (j.contains("variants")) {
    spec.variants.clear();
    for (const auto& name : j.at("variants").get<std::vector<std::string>>())
      spec.variants.push_back(variant_from_name(name));
  }
  if (j.contains("sweep")) spec.sweep = sweep_axis_from_name(j.at("sweep").get<std::string>());
  get_to(j, "sweep_ue_counts", spec.sweep_ue_counts);
  get_to(j, "sweep_power_dbm", spec.sweep_power_dbm);
  get_to(j, "output_dir", spec.output_dir);
  get_to(j, "max_parallel", spec.max_parallel);
}

}  // namespace

ExperimentSpec parse_experiment_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
  }
  ExperimentSpec spec;
  reject_unknown(j, "", {"env", "ppo", "experiment"});
  if (j.contains("env")) parse_env(j.at("env"), spec.env);
  if (j.contains("ppo")) parse_ppo(j.at("ppo"), spec.ppo, spec.env);
  if (j.contains("experiment")) parse_experiment(j.at("experiment"), spec);
  spec.validate();
  return spec;
}

std::string default_spec_json() {
  json j;
  j["env"]["geometry"] = {{"region_x_m", 10.0},
                          {"region_y_m", 10.0},
                          {"waveguide_height_m", 3.0},
                          {"num_waveguides", 3},
                          {"pas_per_waveguide", 4},
                          {"num_ues", 5},
                          {"ue_antennas", 3},
                          {"antenna_spacing_m", 0.005357142857142857},
                          {"carrier_hz", 2.8e10},
                          {"refractive_index", 1.4},
                          {"light_speed_m_s", 3.0e8}};
  j["env"]["compute"] = {{"ue_cpu_hz", 1.0e9},
                         {"bs_cpu_hz", 2.0e9},
                         {"cycles_per_bit", 100.0},
                         {"slot_seconds", 2.0}};
  j["env"]["radio"] = {{"bandwidth_hz", 1.0e7},
                       {"max_tx_power_dbm", 20.0},
                       {"noise_power_dbm", -90.0}};
  j["env"]["tasks"] = {{"bits_per_slot", 2.0e7},
                       {"randomize", false},
                       {"bits_range", {1.0e7, 3.0e7}}};
  j["env"]["latency"] = {{"qos_seconds", 2.0},
                         {"qos_reward", 1.0},
                         {"penalty_per_second", 1.0},
                         {"reward_latency_cap_seconds", 10.0},
                         {"movement_s_per_m", 0.01}};
  j["env"]["mobility"] = {{"random_walk", false}, {"walk_step_m", 1.0}};
  j["env"]["episode"] = {{"steps", 30}};
  j["ppo"] = {{"learning_rate", 1.0e-3},
              {"lr_anneal", true},
              {"gamma", 0.9},
              {"gae_lambda", 0.95},
              {"clip_epsilon", 0.2},
              {"update_epochs", 10},
              {"minibatch_size", 128},
              {"batch_size", 512},
              {"value_loss_weight", 0.5},
              {"entropy_weight", 0.0},
              {"max_grad_norm", 0.5},
              {"hidden_sizes", {64, 128, 64}},
              {"lb_episodes", 400}};
  j["experiment"] = {{"episodes", 2000},
                     {"eval_episodes", 100},
                     {"seeds", {1, 2, 3}},
                     {"variants", {"pass-movable", "pass-fixed", "mimo"}},
                     {"sweep", "none"},
                     {"sweep_ue_counts", {5, 6, 7, 8, 9}},
                     {"sweep_power_dbm", {10.0, 15.0, 20.0, 25.0}},
                     {"output_dir", "runs"},
                     {"max_parallel", 0}};
  return j.dump(2) + "\n";
}

}  // namespace passmec
