#include "passmec.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "passmec/config.hpp"
#include "passmec/env.hpp"
#include "passmec/experiment.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
pm_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return PM_ERR_INVALID_ARGUMENT;
  } catch (const std::domain_error& e) {
    set_error(e.what());
    return PM_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(e.what());
    // I/O problems surface as runtime_errors with a path in the message.
    return std::string(e.what()).find("cannot") != std::string::npos ||
                   std::string(e.what()).find("write failed") != std::string::npos
               ? PM_ERR_IO
               : PM_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return PM_ERR_INTERNAL;
  }
}

double json_safe(double v) {
  if (v > PM_INFINITE_LATENCY) return PM_INFINITE_LATENCY;
  return v;
}

}  // namespace

struct pm_env {
  passmec::PassMecEnv env;
  std::string last_info;
};

struct pm_experiment {
  passmec::ExperimentSpec spec;
};

extern "C" {

const char* pm_status_name(pm_status status) {
  switch (status) {
    case PM_OK: return "ok";
    case PM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PM_ERR_BAD_CONFIG: return "bad config";
    case PM_ERR_IO: return "io error";
    case PM_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* pm_last_error(void) { return g_last_error.c_str(); }

const char* pm_version(void) { return "1.0.0"; }

pm_status pm_env_create(const char* config_json, const char* variant, pm_env** out) {
  if (!config_json || !out) {
    set_error("pm_env_create: null argument");
    return PM_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  passmec::ExperimentSpec spec;
  try {
    spec = passmec::parse_experiment_spec(config_json);
  } catch (const std::exception& e) {
    set_error(e.what());
    return PM_ERR_BAD_CONFIG;
  }
  return guarded([&]() -> pm_status {
    passmec::EnvConfig cfg = spec.env;
    if (variant) cfg.variant = passmec::variant_from_name(variant);
    *out = new pm_env{passmec::PassMecEnv(cfg), {}};
    return PM_OK;
  });
}

void pm_env_destroy(pm_env* env) { delete env; }

int pm_env_observation_size(const pm_env* env) { return env ? env->env.observation_size() : 0; }

int pm_env_action_size(const pm_env* env) { return env ? env->env.action_size() : 0; }

pm_status pm_env_reset(pm_env* env, uint64_t seed, double* obs_out) {
  if (!env || !obs_out) {
    set_error("pm_env_reset: null argument");
    return PM_ERR_INVALID_ARGUMENT;
  }
  return guarded([&]() -> pm_status {
    std::vector<double> obs = env->env.reset(seed);
    std::memcpy(obs_out, obs.data(), obs.size() * sizeof(double));
    env->last_info.clear();
    return PM_OK;
  });
}

pm_status pm_env_step(pm_env* env, const double* action, int action_size, double* obs_out,
                      double* reward_out, int* done_out) {
  if (!env || !action || !obs_out || !reward_out || !done_out) {
    set_error("pm_env_step: null argument");
    return PM_ERR_INVALID_ARGUMENT;
  }
  return guarded([&]() -> pm_status {
    auto res = env->env.step(std::span<const double>(action, static_cast<std::size_t>(action_size)));
    std::memcpy(obs_out, res.observation.data(), res.observation.size() * sizeof(double));
    *reward_out = res.reward;
    *done_out = res.done ? 1 : 0;

    nlohmann::json info;
    info["reward"] = res.info.reward;
    info["movement_delay_s"] = res.info.movement_delay_s;
    info["assoc"] = res.info.assoc;
    info["beta"] = res.info.beta;
    info["task_bits"] = res.info.task_bits;
    info["rate_bits_per_s"] = res.info.rate_bits_per_s;
    nlohmann::json per_ue = nlohmann::json::array();
    for (const auto& b : res.info.per_ue) {
      per_ue.push_back({{"t_local_queue", json_safe(b.t_local_queue)},
                        {"t_local_compute", json_safe(b.t_local_compute)},
                        {"t_off_tx", json_safe(b.t_off_tx)},
                        {"t_off_queue", json_safe(b.t_off_queue)},
                        {"t_off_compute", json_safe(b.t_off_compute)},
                        {"t_move", json_safe(b.t_move)},
                        {"t_total", json_safe(b.t_total)}});
    }
    info["latency"] = std::move(per_ue);
    env->last_info = info.dump();
    return PM_OK;
  });
}

pm_status pm_env_set_episode(pm_env* env, int episode_index) {
  if (!env) {
    set_error("pm_env_set_episode: null handle");
    return PM_ERR_INVALID_ARGUMENT;
  }
  env->env.set_episode_index(episode_index);
  return PM_OK;
}

const char* pm_env_last_info_json(pm_env* env) { return env ? env->last_info.c_str() : ""; }

pm_status pm_experiment_create(const char* config_json, pm_experiment** out) {
  if (!config_json || !out) {
    set_error("pm_experiment_create: null argument");
    return PM_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  try {
    auto spec = passmec::parse_experiment_spec(config_json);
    *out = new pm_experiment{std::move(spec)};
    return PM_OK;
  } catch (const std::exception& e) {
    set_error(e.what());
    return PM_ERR_BAD_CONFIG;
  }
}

void pm_experiment_destroy(pm_experiment* exp) { delete exp; }

pm_status pm_experiment_set_output_dir(pm_experiment* exp, const char* dir) {
  if (!exp || !dir || !*dir) {
    set_error("set_output_dir: null or empty argument");
    return PM_ERR_INVALID_ARGUMENT;
  }
  exp->spec.output_dir = dir;
  return PM_OK;
}

pm_status pm_experiment_set_episodes(pm_experiment* exp, int episodes) {
  if (!exp || episodes < 1) {
    set_error("set_episodes: need a handle and episodes >= 1");
    return PM_ERR_INVALID_ARGUMENT;
  }
  exp->spec.episodes = episodes;
  return PM_OK;
}

pm_status pm_experiment_set_eval_episodes(pm_experiment* exp, int episodes) {
  if (!exp || episodes < 1) {
    set_error("set_eval_episodes: need a handle and episodes >= 1");
    return PM_ERR_INVALID_ARGUMENT;
  }
  exp->spec.eval_episodes = episodes;
  return PM_OK;
}

pm_status pm_experiment_set_seeds(pm_experiment* exp, const uint64_t* seeds, int count) {
  if (!exp || !seeds || count < 1) {
    set_error("set_seeds: need a handle and at least one seed");
    return PM_ERR_INVALID_ARGUMENT;
  }
  exp->spec.seeds.assign(seeds, seeds + count);
  return PM_OK;
}

pm_status pm_experiment_set_variant(pm_experiment* exp, const char* variant) {
  if (!exp || !variant) {
    set_error("set_variant: null argument");
    return PM_ERR_INVALID_ARGUMENT;
  }
  return guarded([&]() -> pm_status {
    exp->spec.variants = {passmec::variant_from_name(variant)};
    return PM_OK;
  });
}

pm_status pm_experiment_set_sweep(pm_experiment* exp, const char* axis) {
  if (!exp || !axis) {
    set_error("set_sweep: null argument");
    return PM_ERR_INVALID_ARGUMENT;
  }
  return guarded([&]() -> pm_status {
    exp->spec.sweep = passmec::sweep_axis_from_name(axis);
    return PM_OK;
  });
}

pm_status pm_experiment_run_training(pm_experiment* exp) {
  if (!exp) {
    set_error("run_training: null handle");
    return PM_ERR_INVALID_ARGUMENT;
  }
  return guarded([&]() -> pm_status {
    passmec::run_training(exp->spec);
    return PM_OK;
  });
}

pm_status pm_experiment_run_sweep(pm_experiment* exp) {
  if (!exp) {
    set_error("run_sweep: null handle");
    return PM_ERR_INVALID_ARGUMENT;
  }
  return guarded([&]() -> pm_status {
    passmec::run_sweep(exp->spec);
    return PM_OK;
  });
}

pm_status pm_evaluate_checkpoint(const char* checkpoint_path, const char* config_json,
                                 int episodes, uint64_t seed, pm_eval_summary* out) {
  if (!checkpoint_path || !config_json || !out) {
    set_error("pm_evaluate_checkpoint: null argument");
    return PM_ERR_INVALID_ARGUMENT;
  }
  passmec::ExperimentSpec spec;
  try {
    spec = passmec::parse_experiment_spec(config_json);
  } catch (const std::exception& e) {
    set_error(e.what());
    return PM_ERR_BAD_CONFIG;
  }
  return guarded([&]() -> pm_status {
    passmec::EvalSummary s =
        passmec::evaluate_checkpoint(checkpoint_path, spec.env, episodes, seed);
    out->mean_reward = s.mean_reward;
    out->mean_latency_s = s.mean_latency_s;
    out->qos_fraction = s.qos_fraction;
    out->mean_q_local_bits = s.mean_q_local_bits;
    out->mean_q_bs_bits = s.mean_q_bs_bits;
    out->episodes = s.episodes;
    return PM_OK;
  });
}

char* pm_default_config_json(void) {
  std::string text = passmec::default_spec_json();
  char* buf = new char[text.size() + 1];
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return buf;
}

void pm_string_free(char* s) { delete[] s; }

}  // extern "C"
