#include "mqrl/mqrl.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "mqrl/error.hpp"
#include "mqrl/harness.hpp"

struct mqrl_config {
  mqrl::harness::RunConfig config;
};

struct mqrl_genome {
  mqrl::policy::Genome genome;
};

struct mqrl_env {
  std::unique_ptr<mqrl::env::Environment> env;
};

namespace {

thread_local std::string g_last_error;

mqrl_status status_of(mqrl::ErrorCode code) {
  switch (code) {
    case mqrl::ErrorCode::InvalidArgument: return MQRL_ERR_INVALID_ARGUMENT;
    case mqrl::ErrorCode::Configuration: return MQRL_ERR_CONFIG;
    case mqrl::ErrorCode::State: return MQRL_ERR_STATE;
    case mqrl::ErrorCode::Io: return MQRL_ERR_IO;
    case mqrl::ErrorCode::Format: return MQRL_ERR_FORMAT;
  }
  return MQRL_ERR_INTERNAL;
}

template <class Fn>
mqrl_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    return fn();
  } catch (const mqrl::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return MQRL_ERR_CONFIG;
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return MQRL_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MQRL_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return MQRL_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) mqrl::fail(mqrl::ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

mqrl_status copy_out(std::span<const double> src, double* buf, size_t cap, size_t* len) {
  if (len) *len = src.size();
  if (cap < src.size()) {
    g_last_error = "buffer too small: need " + std::to_string(src.size());
    return MQRL_ERR_BUFFER;
  }
  if (!src.empty()) {
    need(buf, "output buffer");
    std::memcpy(buf, src.data(), src.size() * sizeof(double));
  }
  return MQRL_OK;
}

std::vector<std::string> split_list(const char* s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

extern "C" {

const char* mqrl_version(void) { return "1.0.0"; }

const char* mqrl_last_error(void) { return g_last_error.c_str(); }

mqrl_status mqrl_config_new(mqrl_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new mqrl_config{};
    return MQRL_OK;
  });
}

mqrl_status mqrl_config_from_json(const char* json, mqrl_config** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    const auto j = nlohmann::json::parse(json);
    *out = new mqrl_config{mqrl::harness::run_config_from_json(j)};
    return MQRL_OK;
  });
}

mqrl_status mqrl_config_load(const char* path, mqrl_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    std::ifstream in(path);
    mqrl::require(static_cast<bool>(in), mqrl::ErrorCode::Io,
                  std::string("cannot open config '") + path + "'");
    const auto j = nlohmann::json::parse(in);
    *out = new mqrl_config{mqrl::harness::run_config_from_json(j)};
    return MQRL_OK;
  });
}

mqrl_status mqrl_config_set(mqrl_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    need(cfg, "cfg");
    need(key, "key");
    need(value, "value");
    mqrl::harness::set_config_value(cfg->config, key, value);
    return MQRL_OK;
  });
}

mqrl_status mqrl_config_to_json(const mqrl_config* cfg, char* buf, size_t cap, size_t* len) {
  return guarded([&] {
    need(cfg, "cfg");
    const std::string s = mqrl::harness::to_json(cfg->config).dump();
    if (len) *len = s.size() + 1;
    if (cap < s.size() + 1) {
      g_last_error = "buffer too small";
      return MQRL_ERR_BUFFER;
    }
    need(buf, "buf");
    std::memcpy(buf, s.c_str(), s.size() + 1);
    return MQRL_OK;
  });
}

mqrl_status mqrl_config_validate(const mqrl_config* cfg) {
  return guarded([&] {
    need(cfg, "cfg");
    cfg->config.validate();
    return MQRL_OK;
  });
}

void mqrl_config_free(mqrl_config* cfg) { delete cfg; }

mqrl_status mqrl_run(const mqrl_config* cfg, mqrl_run_summary* summary) {
  return guarded([&] {
    need(cfg, "cfg");
    const auto record = mqrl::harness::run_experiment(cfg->config);
    if (summary) {
      summary->evaluations = record.evals.size();
      summary->best_fitness = record.best_fitness();
      summary->wall_clock_s = record.evals.empty() ? 0.0 : record.evals.back().wall_clock_s;
    }
    return MQRL_OK;
  });
}

mqrl_status mqrl_run_suite(const mqrl_config* base, const char* envs, const char* algos,
                           uint32_t n_seeds, uint32_t jobs) {
  return guarded([&] {
    need(base, "base");
    mqrl::harness::SuiteConfig suite;
    suite.base = base->config;
    suite.seeds = n_seeds;
    suite.jobs = jobs;
    if (envs) {
      suite.envs.clear();
      for (const auto& e : split_list(envs)) suite.envs.push_back(mqrl::env::parse_env(e));
    }
    if (algos) {
      suite.methods.clear();
      for (const auto& a : split_list(algos))
        suite.methods.push_back(mqrl::harness::parse_method(a));
    }
    mqrl::harness::run_suite(suite);
    return MQRL_OK;
  });
}

mqrl_status mqrl_run_sweep(const mqrl_config* base, const char* grid_json, uint32_t n_seeds,
                           uint32_t jobs) {
  return guarded([&] {
    need(base, "base");
    need(grid_json, "grid_json");
    const auto grid = nlohmann::json::parse(grid_json);
    mqrl::require(grid.is_object() && !grid.empty(), mqrl::ErrorCode::Configuration,
                  "sweep grid must be a non-empty object of arrays");
    std::vector<mqrl::harness::SweepAxis> axes;
    for (const auto& [key, values] : grid.items()) {
      mqrl::require(values.is_array(), mqrl::ErrorCode::Configuration,
                    "sweep axis '" + key + "' must be an array");
      axes.push_back({key, std::vector<nlohmann::json>(values.begin(), values.end())});
    }
    mqrl::harness::run_sweep(base->config, axes, n_seeds, jobs);
    return MQRL_OK;
  });
}

mqrl_status mqrl_metrics(const char* in_dir, const char* out_path, double threshold_minigrid,
                         double threshold_cartpole) {
  return guarded([&] {
    need(in_dir, "in_dir");
    need(out_path, "out_path");
    const auto runs = mqrl::harness::read_run_dir(in_dir);
    mqrl::require(!runs.empty(), mqrl::ErrorCode::Io,
                  std::string("no run CSVs found under '") + in_dir + "'");
    std::map<std::string, double> thresholds;
    if (threshold_minigrid > 0) thresholds["minigrid5x5"] = threshold_minigrid;
    if (threshold_cartpole > 0) thresholds["cartpole"] = threshold_cartpole;
    const auto report = mqrl::harness::compute_metrics(runs, thresholds);
    std::ofstream out(out_path, std::ios::trunc);
    mqrl::require(static_cast<bool>(out), mqrl::ErrorCode::Io,
                  std::string("cannot write '") + out_path + "'");
    out << mqrl::harness::to_json(report).dump(2) << '\n';
    return MQRL_OK;
  });
}

mqrl_status mqrl_genome_new(const char* layout, uint32_t bond_dim, uint64_t seed,
                            mqrl_genome** out) {
  return guarded([&] {
    need(layout, "layout");
    need(out, "out");
    *out = new mqrl_genome{
        mqrl::policy::init_genome(mqrl::policy::parse_layout(layout), seed, bond_dim)};
    return MQRL_OK;
  });
}

mqrl_status mqrl_genome_from_values(const char* layout, uint32_t bond_dim, const double* values,
                                    size_t n, mqrl_genome** out) {
  return guarded([&] {
    need(layout, "layout");
    need(out, "out");
    if (n) need(values, "values");
    std::vector<double> v(values, values + n);
    *out = new mqrl_genome{
        mqrl::policy::Genome(mqrl::policy::parse_layout(layout), bond_dim, std::move(v))};
    return MQRL_OK;
  });
}

mqrl_status mqrl_genome_load(const char* path, mqrl_genome** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new mqrl_genome{mqrl::policy::load_genome(path)};
    return MQRL_OK;
  });
}

mqrl_status mqrl_genome_save(const mqrl_genome* g, const char* path) {
  return guarded([&] {
    need(g, "genome");
    need(path, "path");
    mqrl::policy::save_genome(path, g->genome);
    return MQRL_OK;
  });
}

mqrl_status mqrl_genome_values(const mqrl_genome* g, double* buf, size_t cap, size_t* len) {
  return guarded([&] {
    need(g, "genome");
    return copy_out(g->genome.values(), buf, cap, len);
  });
}

void mqrl_genome_free(mqrl_genome* g) { delete g; }

mqrl_status mqrl_policy_forward(const mqrl_genome* g, const double* obs, size_t n_obs,
                                double* out, size_t cap, size_t* len) {
  return guarded([&] {
    need(g, "genome");
    need(obs, "obs");
    const auto dist = mqrl::policy::VqcPolicy(g->genome).forward({obs, n_obs});
    return copy_out(dist.values, out, cap, len);
  });
}

mqrl_status mqrl_evaluate_fitness(const mqrl_genome* g, const char* env, uint32_t episodes,
                                  uint64_t seed, uint64_t eval_index, double* fitness) {
  return guarded([&] {
    need(g, "genome");
    need(env, "env");
    need(fitness, "fitness");
    *fitness = mqrl::harness::evaluate_fitness(g->genome, mqrl::env::parse_env(env),
                                               static_cast<int>(episodes), seed, eval_index);
    return MQRL_OK;
  });
}

mqrl_status mqrl_env_new(const char* name, mqrl_env** out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    *out = new mqrl_env{mqrl::env::make_environment(mqrl::env::parse_env(name))};
    return MQRL_OK;
  });
}

mqrl_status mqrl_env_reset(mqrl_env* e, uint64_t seed, double* obs, size_t cap, size_t* len) {
  return guarded([&] {
    need(e, "env");
    if (len) *len = e->env->obs_dim();
    if (cap < e->env->obs_dim()) {
      g_last_error = "buffer too small";
      return MQRL_ERR_BUFFER;
    }
    return copy_out(e->env->reset(seed), obs, cap, len);
  });
}

mqrl_status mqrl_env_step(mqrl_env* e, int action, double* obs, size_t cap, size_t* len,
                          double* reward, int* done) {
  return guarded([&] {
    need(e, "env");
    if (len) *len = e->env->obs_dim();
    if (cap < e->env->obs_dim()) {
      g_last_error = "buffer too small";
      return MQRL_ERR_BUFFER;
    }
    const auto t = e->env->step(action);
    if (reward) *reward = t.reward;
    if (done) *done = t.done ? 1 : 0;
    return copy_out(t.obs, obs, cap, len);
  });
}

void mqrl_env_free(mqrl_env* e) { delete e; }

}  // extern "C"
