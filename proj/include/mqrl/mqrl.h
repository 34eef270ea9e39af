/*
 * C interface to the mqrl library.
 *
 * Every function returns an mqrl_status. On failure the message for the
 * calling thread is available from mqrl_last_error() until the next call
 * into the library on that thread. Handles are opaque and owned by the
 * caller; release them with the matching *_free function (NULL is accepted).
 *
 * Functions that fill a caller buffer take (buf, cap, len): `len` receives
 * the number of elements required. If `cap` is too small nothing is written
 * and MQRL_ERR_BUFFER is returned.
 */
#ifndef MQRL_H
#define MQRL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MQRL_BUILDING)
#    define MQRL_API __declspec(dllexport)
#  else
#    define MQRL_API __declspec(dllimport)
#  endif
#else
#  define MQRL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mqrl_status {
  MQRL_OK = 0,
  MQRL_ERR_INVALID_ARGUMENT = 1,
  MQRL_ERR_CONFIG = 2,
  MQRL_ERR_STATE = 3,
  MQRL_ERR_IO = 4,
  MQRL_ERR_FORMAT = 5,
  MQRL_ERR_BUFFER = 6,
  MQRL_ERR_INTERNAL = 99
} mqrl_status;

typedef struct mqrl_config mqrl_config;
typedef struct mqrl_genome mqrl_genome;
typedef struct mqrl_env mqrl_env;

MQRL_API const char* mqrl_version(void);
MQRL_API const char* mqrl_last_error(void);

/* ---------------------------------------------------------------- config -- */

/* Default run configuration (cartpole, pso, seed 0). */
MQRL_API mqrl_status mqrl_config_new(mqrl_config** out);
/* JSON object mirroring the run configuration; missing keys keep defaults. */
MQRL_API mqrl_status mqrl_config_from_json(const char* json, mqrl_config** out);
MQRL_API mqrl_status mqrl_config_load(const char* path, mqrl_config** out);
/* key is a config field ("seed", "env", ...) or "hyperparams.<name>".
 * value is parsed as JSON when possible, else used as a string. */
MQRL_API mqrl_status mqrl_config_set(mqrl_config* cfg, const char* key, const char* value);
/* Serialized configuration, NUL-terminated; len includes the terminator. */
MQRL_API mqrl_status mqrl_config_to_json(const mqrl_config* cfg, char* buf, size_t cap,
                                         size_t* len);
MQRL_API mqrl_status mqrl_config_validate(const mqrl_config* cfg);
MQRL_API void mqrl_config_free(mqrl_config* cfg);

/* ------------------------------------------------------------------ runs -- */

typedef struct mqrl_run_summary {
  uint64_t evaluations;
  double best_fitness;
  double wall_clock_s;
} mqrl_run_summary;

/* Runs one experiment; files go to the configured output_dir. */
MQRL_API mqrl_status mqrl_run(const mqrl_config* cfg, mqrl_run_summary* summary);

/* Comma-separated env and algo lists; NULL selects all envs / the six
 * metaheuristics. Seeds run base.seed .. base.seed + n_seeds - 1. Writes
 * metrics.json next to the run files. */
MQRL_API mqrl_status mqrl_run_suite(const mqrl_config* base, const char* envs, const char* algos,
                                    uint32_t n_seeds, uint32_t jobs);

/* grid_json: {"<hyperparameter>": [v1, v2, ...], ...}. Writes sweep.json. */
MQRL_API mqrl_status mqrl_run_sweep(const mqrl_config* base, const char* grid_json,
                                    uint32_t n_seeds, uint32_t jobs);

/* Aggregates every run CSV under in_dir into a metrics JSON file.
 * Non-positive thresholds select the defaults. */
MQRL_API mqrl_status mqrl_metrics(const char* in_dir, const char* out_path,
                                  double threshold_minigrid, double threshold_cartpole);

/* ---------------------------------------------------------------- genome -- */

/* layout: "minigrid" or "cartpole". bond_dim is ignored for cartpole. */
MQRL_API mqrl_status mqrl_genome_new(const char* layout, uint32_t bond_dim, uint64_t seed,
                                     mqrl_genome** out);
MQRL_API mqrl_status mqrl_genome_from_values(const char* layout, uint32_t bond_dim,
                                             const double* values, size_t n, mqrl_genome** out);
MQRL_API mqrl_status mqrl_genome_load(const char* path, mqrl_genome** out);
MQRL_API mqrl_status mqrl_genome_save(const mqrl_genome* g, const char* path);
MQRL_API mqrl_status mqrl_genome_values(const mqrl_genome* g, double* buf, size_t cap,
                                        size_t* len);
MQRL_API void mqrl_genome_free(mqrl_genome* g);

/* MiniGrid: 6 action probabilities. CartPole: 2 scores. */
MQRL_API mqrl_status mqrl_policy_forward(const mqrl_genome* g, const double* obs, size_t n_obs,
                                         double* out, size_t cap, size_t* len);

MQRL_API mqrl_status mqrl_evaluate_fitness(const mqrl_genome* g, const char* env,
                                           uint32_t episodes, uint64_t seed,
                                           uint64_t eval_index, double* fitness);

/* ------------------------------------------------------------ environment -- */

MQRL_API mqrl_status mqrl_env_new(const char* name, mqrl_env** out);
MQRL_API mqrl_status mqrl_env_reset(mqrl_env* e, uint64_t seed, double* obs, size_t cap,
                                    size_t* len);
MQRL_API mqrl_status mqrl_env_step(mqrl_env* e, int action, double* obs, size_t cap,
                                   size_t* len, double* reward, int* done);
MQRL_API void mqrl_env_free(mqrl_env* e);

#ifdef __cplusplus
}
#endif

#endif /* MQRL_H */
