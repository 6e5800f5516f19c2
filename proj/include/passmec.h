/*
 * C API of the passmec shared library.
 *
 * Opaque handles wrap the C++ core; every call returns a pm_status and the
 * last failure message is kept per thread (pm_last_error). JSON configuration
 * uses the same schema as the CLI config files; see README.md.
 *
 * Infinite latencies (an offload attempt at zero rate) are reported in info
 * JSON as the sentinel PM_INFINITE_LATENCY.
 */
#ifndef PASSMEC_H
#define PASSMEC_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define PM_INFINITE_LATENCY 1e300

typedef enum pm_status {
  PM_OK = 0,
  PM_ERR_INVALID_ARGUMENT = 1, /* bad pointer, dimension or value */
  PM_ERR_BAD_CONFIG = 2,       /* config JSON failed to parse or validate */
  PM_ERR_IO = 3,               /* file could not be read or written */
  PM_ERR_INTERNAL = 4,
} pm_status;

const char* pm_status_name(pm_status status);

/* Message for the most recent failure on the calling thread. */
const char* pm_last_error(void);

const char* pm_version(void);

/* ------------------------------------------------------------------ */
/* Environment: slot-by-slot simulator                                  */
/* ------------------------------------------------------------------ */

typedef struct pm_env pm_env;

/* config_json: full experiment spec; "env" and the variant apply here.
 * variant: "pass-movable", "pass-fixed" or "mimo"; NULL keeps the config's. */
pm_status pm_env_create(const char* config_json, const char* variant, pm_env** out);
void pm_env_destroy(pm_env* env);

int pm_env_observation_size(const pm_env* env);
int pm_env_action_size(const pm_env* env);

/* Starts a new episode; writes observation_size doubles to obs_out. */
pm_status pm_env_reset(pm_env* env, uint64_t seed, double* obs_out);

/* Advances one slot. action must hold action_size entries in [-1, 1].
 * Writes the next observation, the step reward and the done flag. */
pm_status pm_env_step(pm_env* env, const double* action, int action_size, double* obs_out,
                      double* reward_out, int* done_out);

/* Feeds the episode index that drives the load-balancing anneal. */
pm_status pm_env_set_episode(pm_env* env, int episode_index);

/* Per-UE latency breakdown of the last step as a JSON document. The pointer
 * stays valid until the next step/reset/destroy on this handle. */
const char* pm_env_last_info_json(pm_env* env);

/* ------------------------------------------------------------------ */
/* Experiments: training campaigns, sweeps, checkpoint evaluation       */
/* ------------------------------------------------------------------ */

typedef struct pm_experiment pm_experiment;

pm_status pm_experiment_create(const char* config_json, pm_experiment** out);
void pm_experiment_destroy(pm_experiment* exp);

/* CLI-style overrides, applied on top of the config file. */
pm_status pm_experiment_set_output_dir(pm_experiment* exp, const char* dir);
pm_status pm_experiment_set_episodes(pm_experiment* exp, int episodes);
pm_status pm_experiment_set_eval_episodes(pm_experiment* exp, int episodes);
pm_status pm_experiment_set_seeds(pm_experiment* exp, const uint64_t* seeds, int count);
pm_status pm_experiment_set_variant(pm_experiment* exp, const char* variant);
pm_status pm_experiment_set_sweep(pm_experiment* exp, const char* axis); /* "ues" | "power" */

/* Trains every (variant, seed) pair; writes train_<run>.csv and <run>.ckpt
 * under the output directory. */
pm_status pm_experiment_run_training(pm_experiment* exp);

/* Trains/evaluates across the sweep axis and writes sweep_summary.csv. */
pm_status pm_experiment_run_sweep(pm_experiment* exp);

typedef struct pm_eval_summary {
  double mean_reward;
  double mean_latency_s;
  double qos_fraction;
  double mean_q_local_bits;
  double mean_q_bs_bits;
  int episodes;
} pm_eval_summary;

/* Deterministic mean-policy rollout of a stored checkpoint under the given
 * config. Fails with PM_ERR_INVALID_ARGUMENT when dimensions mismatch. */
pm_status pm_evaluate_checkpoint(const char* checkpoint_path, const char* config_json,
                                 int episodes, uint64_t seed, pm_eval_summary* out);

/* The built-in default configuration as a JSON document. Free with
 * pm_string_free. */
char* pm_default_config_json(void);
void pm_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* PASSMEC_H */
