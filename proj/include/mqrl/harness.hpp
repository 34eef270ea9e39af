#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mqrl/environments.hpp"
#include "mqrl/optimizers.hpp"
#include "mqrl/policy.hpp"
#include "mqrl/rng.hpp"

namespace mqrl::harness {

// Optimizers plus the uniform-random action baseline, which has no genome.
enum class Method { SA, PSO, ACO, TS, HS, GA, RandomSearch, RandomPolicy };

std::string_view method_name(Method m);
Method parse_method(std::string_view name);
std::optional<opt::Algorithm> optimizer_of(Method m);

inline constexpr double kDefaultThresholdMiniGrid = 0.8;
inline constexpr double kDefaultThresholdCartPole = 195.0;
double default_threshold(env::EnvKind env);

// ---------------------------------------------------------------- fitness --

using PolicyFn = std::function<int(std::span<const double> obs, Rng& rng)>;

struct RolloutResult {
  double total_reward = 0.0;
  int steps = 0;
};

// One undiscounted episode. The environment is reset with a seed drawn from
// `rng`, which then drives any action sampling.
RolloutResult rollout(env::Environment& environment, const PolicyFn& policy, Rng& rng,
                      std::ostream* trajectory = nullptr);

// Seed of rollout `r` within evaluation `eval_index` of a run seeded `seed`.
std::uint64_t rollout_seed(std::uint64_t seed, std::uint64_t eval_index, int r);

// Mean return over K rollouts of an arbitrary policy.
double evaluate_policy(const PolicyFn& policy, env::EnvKind env, int episodes,
                       std::uint64_t seed, std::uint64_t eval_index);

// Mean return of the genome's circuit policy over K rollouts. MiniGrid
// actions are sampled from the softmax; CartPole is greedy.
double evaluate_fitness(const policy::Genome& genome, env::EnvKind env, int episodes,
                        std::uint64_t seed, std::uint64_t eval_index);

double random_policy_fitness(env::EnvKind env, int episodes, std::uint64_t seed,
                             std::uint64_t eval_index);

// Greedy (MiniGrid: sampled) policy bound to a compiled genome. MiniGrid
// forward passes are memoized per observation.
PolicyFn make_genome_policy(const policy::Genome& genome);

// --------------------------------------------------------------- run config --

struct RunConfig {
  env::EnvKind env = env::EnvKind::CartPole;
  Method method = Method::PSO;
  std::uint64_t seed = 0;
  std::uint64_t budget_evals = 1000;
  int episodes_per_eval = 3;
  std::optional<double> wall_clock_limit_s;
  std::filesystem::path output_dir;  // empty: keep results in memory only
  nlohmann::json hyperparams = nlohmann::json::object();  // overrides
  std::size_t bond_dim = 2;
  bool freeze_mps = false;
  double init_scale = policy::kInitScale;
  int threads = 1;
  bool dump_trajectory = false;

  void validate() const;
  std::string run_name() const;  // "<env>_<algo>_seed<seed>"
};

nlohmann::json to_json(const RunConfig& config);
// Missing keys keep defaults; unknown keys are rejected.
RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base = {});
// Sets one field from "key=value" style input; value is parsed as JSON when
// possible, otherwise taken as a string. Keys under "hyperparams." go to the
// override object.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);

// --------------------------------------------------------------- run record --

struct EvalRecord {
  std::uint64_t eval_index = 0;
  std::uint64_t episodes_used = 0;
  double wall_clock_s = 0.0;
  double fitness = 0.0;
  double best_so_far = 0.0;
};

struct RunRecord {
  RunConfig config;
  std::vector<EvalRecord> evals;
  std::optional<policy::Genome> best_genome;
  double best_fitness() const { return evals.empty() ? 0.0 : evals.back().best_so_far; }
};

inline constexpr std::string_view kCsvHeader =
    "algo,env,seed,eval_index,episodes_used,wall_clock_s,fitness,best_so_far";

std::string format_csv_row(const RunConfig& config, const EvalRecord& rec);

// Drives the configured method until budget_evals evaluations are consumed or
// the optional wall-clock limit passes. With an output directory, writes
// <name>.csv (flushed per row), <name>.json (config snapshot) and, for genome
// methods, <name>.genome.
RunRecord run_experiment(const RunConfig& config);

// ------------------------------------------------------------------ metrics --

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// E / P where E is the episodes consumed when best_so_far first reaches P;
// +infinity if never reached.
double learning_speed(std::span<const EvalRecord> evals, double threshold);
// Population standard deviation (1/N).
double stability(std::span<const double> finals);

struct MaxPerformance {
  double mean = 0.0;
  double max = 0.0;
};
MaxPerformance max_performance(std::span<const double> finals);

struct RunSeries {
  std::string algo;
  std::string env;
  std::uint64_t seed = 0;
  std::vector<EvalRecord> evals;
  std::filesystem::path source;
};

RunSeries read_run_csv(const std::filesystem::path& path);
// Every *.csv in `dir` (recursively) whose header matches the run schema.
std::vector<RunSeries> read_run_dir(const std::filesystem::path& dir);

struct CellMetrics {
  std::string env;
  std::string algo;
  double threshold = 0.0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> finals;
  std::vector<double> learning_speeds;
  double v_l = kInfinity;  // mean over seeds that reached the threshold
  std::size_t reached = 0;
  double sigma = 0.0;
  double p_max = 0.0;
  double p_max_best = 0.0;
};

struct MetricsReport {
  std::vector<CellMetrics> cells;
  std::map<std::string, double> thresholds;
};

MetricsReport compute_metrics(std::span<const RunSeries> runs,
                              const std::map<std::string, double>& thresholds);
// Infinite values are written as the string "inf".
nlohmann::json to_json(const MetricsReport& report);

// -------------------------------------------------------------- suite/sweep --

struct SuiteConfig {
  RunConfig base;
  std::vector<env::EnvKind> envs{env::EnvKind::MiniGrid, env::EnvKind::CartPole};
  std::vector<Method> methods{Method::SA, Method::PSO, Method::ACO, Method::TS,
                              Method::HS, Method::GA};
  std::uint32_t seeds = 5;
  std::uint32_t jobs = 1;
};

// Runs the full env x method x seed grid and writes metrics.json to the base
// output directory.
MetricsReport run_suite(const SuiteConfig& suite);

struct SweepAxis {
  std::string key;  // hyperparameter name
  std::vector<nlohmann::json> values;
};

// Cartesian product of axes; each point runs `seeds` seeds into
// <out>/point<i>/ and the per-point metrics land in <out>/sweep.json.
nlohmann::json run_sweep(const RunConfig& base, std::span<const SweepAxis> axes,
                         std::uint32_t seeds, std::uint32_t jobs);

// Runs fn(i) for i in [0, n) on up to `jobs` threads.
void parallel_for(std::size_t n, std::uint32_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace mqrl::harness
