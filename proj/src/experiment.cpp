#include <chrono>
#include <cstdio>
#include <fstream>
#include <string>

#include "mqrl/error.hpp"
#include "mqrl/harness.hpp"

namespace mqrl::harness {

namespace {

struct MethodName {
  Method method;
  std::string_view name;
};

constexpr MethodName kMethodNames[] = {
    {Method::SA, "sa"},
    {Method::PSO, "pso"},
    {Method::ACO, "aco"},
    {Method::TS, "ts"},
    {Method::HS, "hs"},
    {Method::GA, "ga"},
    {Method::RandomSearch, "random_search"},
    {Method::RandomPolicy, "random_policy"},
};

policy::Layout layout_for(env::EnvKind kind) {
  return kind == env::EnvKind::MiniGrid ? policy::Layout::MiniGrid : policy::Layout::CartPole;
}

std::string fmt10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string_view method_name(Method m) {
  for (const auto& [method, name] : kMethodNames)
    if (method == m) return name;
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (const auto& [method, n] : kMethodNames)
    if (n == name) return method;
  fail(ErrorCode::Configuration, "unknown algorithm '" + std::string(name) + "'");
}

std::optional<opt::Algorithm> optimizer_of(Method m) {
  switch (m) {
    case Method::SA: return opt::Algorithm::SA;
    case Method::PSO: return opt::Algorithm::PSO;
    case Method::ACO: return opt::Algorithm::ACO;
    case Method::TS: return opt::Algorithm::TS;
    case Method::HS: return opt::Algorithm::HS;
    case Method::GA: return opt::Algorithm::GA;
    case Method::RandomSearch: return opt::Algorithm::RandomSearch;
    case Method::RandomPolicy: return std::nullopt;
  }
  return std::nullopt;
}

double default_threshold(env::EnvKind kind) {
  return kind == env::EnvKind::MiniGrid ? kDefaultThresholdMiniGrid : kDefaultThresholdCartPole;
}

// ------------------------------------------------------------------ config --

void RunConfig::validate() const {
  require(budget_evals >= 1, ErrorCode::Configuration, "budget_evals must be >= 1");
  require(episodes_per_eval >= 1, ErrorCode::Configuration, "episodes_per_eval must be >= 1");
  require(!wall_clock_limit_s || *wall_clock_limit_s > 0.0, ErrorCode::Configuration,
          "wall_clock_limit_s must be positive");
  require(bond_dim >= 1 && bond_dim <= 64, ErrorCode::Configuration, "bond_dim must be in 1..64");
  require(init_scale > 0.0, ErrorCode::Configuration, "init_scale must be positive");
  require(threads >= 1, ErrorCode::Configuration, "threads must be >= 1");
  require(hyperparams.is_object(), ErrorCode::Configuration, "hyperparams must be an object");
  if (auto algo = optimizer_of(method))
    opt::apply_overrides(opt::default_hyperparams(*algo, env), hyperparams);
  else
    require(hyperparams.empty(), ErrorCode::Configuration,
            "random_policy takes no hyperparameters");
}

std::string RunConfig::run_name() const {
  return std::string(env::env_name(env)) + "_" + std::string(method_name(method)) + "_seed" +
         std::to_string(seed);
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["env"] = env::env_name(c.env);
  j["algo"] = method_name(c.method);
  j["seed"] = c.seed;
  j["budget_evals"] = c.budget_evals;
  j["episodes_per_eval"] = c.episodes_per_eval;
  j["wall_clock_limit_s"] = c.wall_clock_limit_s ? nlohmann::json(*c.wall_clock_limit_s)
                                                 : nlohmann::json(nullptr);
  j["output_dir"] = c.output_dir.string();
  j["hyperparams"] = c.hyperparams;
  j["bond_dim"] = c.bond_dim;
  j["freeze_mps"] = c.freeze_mps;
  j["init_scale"] = c.init_scale;
  j["threads"] = c.threads;
  j["dump_trajectory"] = c.dump_trajectory;
  return nlohmann::json(j);
}

RunConfig run_config_from_json(const nlohmann::json& j, RunConfig c) {
  require(j.is_object(), ErrorCode::Configuration, "run config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "env") c.env = env::parse_env(v.get<std::string>());
      else if (key == "algo") c.method = parse_method(v.get<std::string>());
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "budget_evals") c.budget_evals = v.get<std::uint64_t>();
      else if (key == "episodes_per_eval") c.episodes_per_eval = v.get<int>();
      else if (key == "wall_clock_limit_s")
        c.wall_clock_limit_s = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
      else if (key == "output_dir") c.output_dir = v.get<std::string>();
      else if (key == "hyperparams") c.hyperparams = v;
      else if (key == "bond_dim") c.bond_dim = v.get<std::size_t>();
      else if (key == "freeze_mps") c.freeze_mps = v.get<bool>();
      else if (key == "init_scale") c.init_scale = v.get<double>();
      else if (key == "threads") c.threads = v.get<int>();
      else if (key == "dump_trajectory") c.dump_trajectory = v.get<bool>();
      else fail(ErrorCode::Configuration, "unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Configuration, std::string("bad config value: ") + e.what());
  }
  return c;
}

void set_config_value(RunConfig& config, const std::string& key, const std::string& value) {
  nlohmann::json v = nlohmann::json::parse(value, nullptr, false);
  if (v.is_discarded()) v = value;
  constexpr std::string_view hp = "hyperparams.";
  if (key.starts_with(hp)) {
    config.hyperparams[key.substr(hp.size())] = v;
    return;
  }
  config = run_config_from_json(nlohmann::json{{key, v}}, config);
}

// --------------------------------------------------------------------- run --

std::string format_csv_row(const RunConfig& c, const EvalRecord& r) {
  std::string row;
  row.reserve(96);
  row += method_name(c.method);
  row += ',';
  row += env::env_name(c.env);
  row += ',' + std::to_string(c.seed);
  row += ',' + std::to_string(r.eval_index);
  row += ',' + std::to_string(r.episodes_used);
  row += ',' + fmt10(r.wall_clock_s);
  row += ',' + fmt10(r.fitness);
  row += ',' + fmt10(r.best_so_far);
  return row;
}

namespace {

class GenomeObjective final : public opt::Objective {
 public:
  GenomeObjective(const RunConfig& c, std::vector<double> frozen_prefix, std::size_t dim)
      : opt::Objective(dim), config_(c), prefix_(std::move(frozen_prefix)) {}

  policy::Genome to_genome(std::span<const double> x) const {
    std::vector<double> values(prefix_);
    values.insert(values.end(), x.begin(), x.end());
    return policy::Genome(layout_for(config_.env), config_.bond_dim, std::move(values));
  }

 protected:
  double evaluate_at(std::span<const double> x, std::uint64_t eval_index) override {
    return evaluate_fitness(to_genome(x), config_.env, config_.episodes_per_eval, config_.seed,
                            eval_index);
  }

  std::vector<double> evaluate_many(std::span<const opt::Vector> candidates,
                                    std::uint64_t first_index) override {
    std::vector<double> out(candidates.size());
    parallel_for(candidates.size(), static_cast<std::uint32_t>(config_.threads),
                 [&](std::size_t i) { out[i] = evaluate_at(candidates[i], first_index + i); });
    return out;
  }

 private:
  const RunConfig& config_;
  std::vector<double> prefix_;
};

class RunWriter {
 public:
  RunWriter(const RunConfig& c) : config_(c) {
    if (c.output_dir.empty()) return;
    std::filesystem::create_directories(c.output_dir);
    const auto path = c.output_dir / (c.run_name() + ".csv");
    csv_.open(path, std::ios::trunc);
    require(static_cast<bool>(csv_), ErrorCode::Io, "cannot open '" + path.string() + "'");
    csv_ << kCsvHeader << '\n';
    csv_.flush();
  }

  void row(const EvalRecord& r) {
    if (!csv_.is_open()) return;
    csv_ << format_csv_row(config_, r) << '\n';
    csv_.flush();
    require(static_cast<bool>(csv_), ErrorCode::Io, "CSV write failed for " + config_.run_name());
  }

 private:
  const RunConfig& config_;
  std::ofstream csv_;
};

void write_sidecars(const RunRecord& record, const nlohmann::json& resolved_hyperparams) {
  const auto& c = record.config;
  if (c.output_dir.empty()) return;
  const std::string name = c.run_name();

  nlohmann::ordered_json meta;
  meta["config"] = to_json(c);
  meta["resolved_hyperparams"] = resolved_hyperparams;
  meta["episodes_per_eval"] = c.episodes_per_eval;
  meta["learning_speed_threshold"] = default_threshold(c.env);
  meta["evaluations"] = record.evals.size();
  meta["best_fitness"] = record.best_fitness();
  std::ofstream(c.output_dir / (name + ".json"), std::ios::trunc) << meta.dump(2) << '\n';

  if (record.best_genome) policy::save_genome(c.output_dir / (name + ".genome"), *record.best_genome);

  if (c.dump_trajectory) {
    std::ofstream traj(c.output_dir / (name + ".trajectory.csv"), std::ios::trunc);
    env::write_trajectory_header(traj);
    auto environment = env::make_environment(c.env);
    Rng rng(rollout_seed(c.seed, 0, 0));
    PolicyFn fn;
    if (record.best_genome) {
      fn = make_genome_policy(*record.best_genome);
    } else {
      const int n = environment->num_actions();
      fn = [n](std::span<const double>, Rng& r) {
        return std::uniform_int_distribution<int>(0, n - 1)(r);
      };
    }
    rollout(*environment, fn, rng, &traj);
  }
}

}  // namespace

RunRecord run_experiment(const RunConfig& config) {
  config.validate();
  RunRecord record;
  record.config = config;
  RunWriter writer(record.config);

  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };
  const auto out_of_time = [&] {
    return config.wall_clock_limit_s && elapsed() >= *config.wall_clock_limit_s;
  };

  double best = 0.0;
  const auto push = [&](std::uint64_t index, double fitness) {
    best = record.evals.empty() ? fitness : std::max(best, fitness);
    EvalRecord r{index, index * static_cast<std::uint64_t>(config.episodes_per_eval), elapsed(),
                 fitness, best};
    record.evals.push_back(r);
    writer.row(r);
  };

  const auto algo = optimizer_of(config.method);
  nlohmann::json resolved = nlohmann::json::object();

  if (!algo) {
    for (std::uint64_t i = 1; i <= config.budget_evals && !out_of_time(); ++i)
      push(i, random_policy_fitness(config.env, config.episodes_per_eval, config.seed, i));
  } else {
    const auto params =
        opt::apply_overrides(opt::default_hyperparams(*algo, config.env), config.hyperparams);
    resolved = opt::to_json(params);

    const auto layout = layout_for(config.env);
    std::vector<double> prefix;
    std::size_t dim = policy::Genome::length_for(layout, config.bond_dim);
    if (config.freeze_mps && layout == policy::Layout::MiniGrid) {
      const auto frozen = policy::init_genome(layout, derive_seed({config.seed, 0x6d7073}),
                                              config.bond_dim, config.init_scale);
      const auto mps = frozen.mps_params();
      prefix.assign(mps.begin(), mps.end());
      dim -= prefix.size();
    }
    GenomeObjective objective(record.config, std::move(prefix), dim);
    auto optimizer = opt::make_optimizer(params, dim, derive_seed({config.seed, 0x6f7074}),
                                         config.init_scale);

    while (record.evals.size() < config.budget_evals && !out_of_time()) {
      const auto candidates = optimizer->ask(config.budget_evals - record.evals.size());
      const std::uint64_t first = objective.eval_count() + 1;
      const auto fitness = objective.evaluate_batch(candidates);
      optimizer->tell(fitness);
      for (std::size_t i = 0; i < fitness.size(); ++i) push(first + i, fitness[i]);
    }
    require(objective.eval_count() == record.evals.size(), ErrorCode::State,
            "evaluation accounting mismatch");
    if (optimizer->has_best()) record.best_genome = objective.to_genome(optimizer->best_genome());
  }

  write_sidecars(record, resolved);
  return record;
}

}  // namespace mqrl::harness
