// mqrl command-line front end. Talks to the library only through mqrl.h.

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mqrl/mqrl.h"

namespace {

constexpr int kExitUsage = 2;

struct ConfigDeleter {
  void operator()(mqrl_config* c) const { mqrl_config_free(c); }
};
using ConfigPtr = std::unique_ptr<mqrl_config, ConfigDeleter>;

struct CliError {
  int code;
  std::string message;
};

void check(mqrl_status st) {
  if (st != MQRL_OK) throw CliError{st == MQRL_ERR_CONFIG ? kExitUsage : 1, mqrl_last_error()};
}

struct RunFlags {
  std::string config_file;
  std::optional<std::string> env;
  std::optional<std::string> algo;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> budget;
  std::optional<int> episodes;
  std::optional<double> wall_clock;
  std::optional<std::string> out;
  std::optional<int> bond_dim;
  std::optional<int> threads;
  bool freeze_mps = false;
  bool dump_trajectory = false;
  std::vector<std::string> sets;
  std::vector<std::string> hps;

  void add_to(CLI::App* app, bool with_env_algo) {
    app->add_option("--config", config_file, "JSON run configuration file");
    if (with_env_algo) {
      app->add_option("--env", env, "minigrid5x5 | cartpole");
      app->add_option("--algo", algo, "sa | pso | aco | ts | hs | ga | random_search | random_policy");
    }
    app->add_option("--seed", seed, "Run seed (suite/sweep: first seed)");
    app->add_option("--budget-evals", budget, "Fitness evaluations per run");
    app->add_option("--episodes", episodes, "Episodes per fitness evaluation (K)");
    app->add_option("--wall-clock", wall_clock, "Optional wall-clock limit per run, seconds");
    app->add_option("--out", out, "Output directory");
    app->add_option("--bond-dim", bond_dim, "MPS bond dimension (MiniGrid)");
    app->add_option("--threads", threads, "Threads for batch fitness evaluation");
    app->add_flag("--freeze-mps", freeze_mps, "Keep MPS tensors at their random initialization");
    app->add_flag("--dump-trajectory", dump_trajectory, "Write a replay CSV of the best policy");
    app->add_option("--hp", hps, "Hyperparameter override name=value (repeatable)");
    app->add_option("--set", sets, "Raw config override key=value (repeatable)");
  }

  ConfigPtr build() const {
    mqrl_config* raw = nullptr;
    check(config_file.empty() ? mqrl_config_new(&raw) : mqrl_config_load(config_file.c_str(), &raw));
    ConfigPtr cfg(raw);
    const auto set = [&](const std::string& key, const std::string& value) {
      check(mqrl_config_set(cfg.get(), key.c_str(), value.c_str()));
    };
    const auto quoted = [](const std::string& s) { return nlohmann::json(s).dump(); };
    if (env) set("env", quoted(*env));
    if (algo) set("algo", quoted(*algo));
    if (seed) set("seed", std::to_string(*seed));
    if (budget) set("budget_evals", std::to_string(*budget));
    if (episodes) set("episodes_per_eval", std::to_string(*episodes));
    if (wall_clock) set("wall_clock_limit_s", nlohmann::json(*wall_clock).dump());
    if (out) set("output_dir", quoted(*out));
    if (bond_dim) set("bond_dim", std::to_string(*bond_dim));
    if (threads) set("threads", std::to_string(*threads));
    if (freeze_mps) set("freeze_mps", "true");
    if (dump_trajectory) set("dump_trajectory", "true");
    for (const auto& kv : hps) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw CliError{kExitUsage, "--hp expects name=value: " + kv};
      set("hyperparams." + kv.substr(0, eq), kv.substr(eq + 1));
    }
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw CliError{kExitUsage, "--set expects key=value: " + kv};
      set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
  }
};

// "inertia=0.4,0.9" -> ("inertia", [0.4, 0.9])
std::pair<std::string, nlohmann::json> parse_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw CliError{kExitUsage, "--param expects name=v1,v2,...: " + spec};
  nlohmann::json values = nlohmann::json::array();
  std::string rest = spec.substr(eq + 1);
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    const auto comma = rest.find(',', pos);
    const std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!item.empty()) {
      auto v = nlohmann::json::parse(item, nullptr, false);
      values.push_back(v.is_discarded() ? nlohmann::json(item) : v);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (values.empty()) throw CliError{kExitUsage, "--param has no values: " + spec};
  return {spec.substr(0, eq), values};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metaheuristic optimization of variational quantum circuit policies"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mqrl_version()));

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "Run one optimization");
  run_flags.add_to(run, true);

  RunFlags suite_flags;
  std::string suite_envs = "minigrid5x5,cartpole";
  std::string suite_algos = "sa,pso,aco,ts,hs,ga";
  std::uint32_t suite_seeds = 5;
  std::uint32_t suite_jobs = 1;
  auto* suite = app.add_subcommand("suite", "Run an algorithm x env x seed grid");
  suite_flags.add_to(suite, false);
  suite->add_option("--envs", suite_envs, "Comma-separated environments");
  suite->add_option("--algos", suite_algos, "Comma-separated algorithms");
  suite->add_option("--seeds", suite_seeds, "Seeds per cell")->check(CLI::PositiveNumber);
  suite->add_option("--jobs", suite_jobs, "Concurrent runs")->check(CLI::PositiveNumber);

  std::string metrics_in;
  std::string metrics_out;
  double th_grid = 0.0;
  double th_cart = 0.0;
  auto* metrics = app.add_subcommand("metrics", "Aggregate run CSVs into metrics JSON");
  metrics->add_option("--in", metrics_in, "Directory with run CSVs")->required();
  metrics->add_option("--out", metrics_out, "Output JSON (default <in>/metrics.json)");
  metrics->add_option("--threshold-minigrid", th_grid, "Learning-speed threshold P (default 0.8)");
  metrics->add_option("--threshold-cartpole", th_cart, "Learning-speed threshold P (default 195)");

  RunFlags sweep_flags;
  std::vector<std::string> sweep_params;
  std::uint32_t sweep_seeds = 3;
  std::uint32_t sweep_jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Enumerate a user-specified hyperparameter grid");
  sweep_flags.add_to(sweep, true);
  sweep->add_option("--param", sweep_params, "Axis name=v1,v2,... (repeatable)")->required();
  sweep->add_option("--seeds", sweep_seeds, "Seeds per grid point")->check(CLI::PositiveNumber);
  sweep->add_option("--jobs", sweep_jobs, "Concurrent runs")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run) {
      auto cfg = run_flags.build();
      mqrl_run_summary summary{};
      check(mqrl_run(cfg.get(), &summary));
      std::printf("evaluations=%llu best_fitness=%.10g wall_clock_s=%.3f\n",
                  static_cast<unsigned long long>(summary.evaluations), summary.best_fitness,
                  summary.wall_clock_s);
    } else if (*suite) {
      auto cfg = suite_flags.build();
      check(mqrl_run_suite(cfg.get(), suite_envs.c_str(), suite_algos.c_str(), suite_seeds,
                           suite_jobs));
      std::printf("suite complete\n");
    } else if (*metrics) {
      if (metrics_out.empty()) metrics_out = metrics_in + "/metrics.json";
      check(mqrl_metrics(metrics_in.c_str(), metrics_out.c_str(), th_grid, th_cart));
      std::printf("wrote %s\n", metrics_out.c_str());
    } else if (*sweep) {
      auto cfg = sweep_flags.build();
      nlohmann::json grid = nlohmann::json::object();
      for (const auto& p : sweep_params) {
        auto [key, values] = parse_axis(p);
        grid[key] = values;
      }
      check(mqrl_run_sweep(cfg.get(), grid.dump().c_str(), sweep_seeds, sweep_jobs));
      std::printf("sweep complete (%zu axes)\n", grid.size());
    }
  } catch (const CliError& e) {
    std::cerr << "mqrl: " << e.message << '\n';
    return e.code;
  }
  return 0;
}
