#include <string>

#include "mqrl/error.hpp"
#include "mqrl/optimizers.hpp"

namespace mqrl::opt {

namespace {

struct AlgoName {
  Algorithm algo;
  std::string_view name;
};

constexpr AlgoName kAlgoNames[] = {
    {Algorithm::SA, "sa"}, {Algorithm::PSO, "pso"}, {Algorithm::ACO, "aco"},
    {Algorithm::TS, "ts"}, {Algorithm::HS, "hs"},   {Algorithm::GA, "ga"},
    {Algorithm::RandomSearch, "random_search"},
};

void check(bool cond, const std::string& what) {
  require(cond, ErrorCode::Configuration, "invalid hyperparameter: " + what);
}

bool unit(double p) { return p >= 0.0 && p <= 1.0; }

// Reads `key` from `j` into `field` when present, consuming it from `seen`.
template <class T>
void read(const nlohmann::json& j, std::string_view key, T& field, std::size_t& seen) {
  auto it = j.find(std::string(key));
  if (it == j.end()) return;
  try {
    field = it->get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorCode::Configuration, "hyperparameter '" + std::string(key) + "' has the wrong type");
  }
  ++seen;
}

}  // namespace

std::string_view algorithm_name(Algorithm algo) {
  for (const auto& [a, n] : kAlgoNames)
    if (a == algo) return n;
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (const auto& [a, n] : kAlgoNames)
    if (n == name) return a;
  fail(ErrorCode::Configuration, "unknown algorithm '" + std::string(name) + "'");
}

Algorithm algorithm_of(const Hyperparams& params) {
  static constexpr Algorithm by_index[] = {Algorithm::SA, Algorithm::PSO, Algorithm::ACO,
                                           Algorithm::TS, Algorithm::HS,  Algorithm::GA,
                                           Algorithm::RandomSearch};
  return by_index[params.index()];
}

Hyperparams default_hyperparams(Algorithm algo, env::EnvKind env) {
  const bool grid = env == env::EnvKind::MiniGrid;
  switch (algo) {
    case Algorithm::SA: {
      SaParams p;
      p.initial_temperature = grid ? 3000.0 : 500000.0;
      return p;
    }
    case Algorithm::PSO: {
      PsoParams p;
      p.n_particles = 20;
      p.inertia = grid ? 0.4 : 0.9;
      p.cognitive = 1.0;
      p.social = grid ? 1.5 : 2.0;
      return p;
    }
    case Algorithm::ACO: {
      AcoParams p;
      p.n_ants = grid ? 10 : 30;
      p.evaporation = grid ? 0.9 : 0.95;
      p.alpha = grid ? 0.5 : 1.0;
      p.beta = grid ? 0.3 : 1.5;
      return p;
    }
    case Algorithm::TS: {
      TabuParams p;
      p.tabu_size = grid ? 7 : 10;
      p.neighborhood_size = grid ? 20 : 40;
      return p;
    }
    case Algorithm::HS: {
      HarmonyParams p;
      p.memory_size = grid ? 30 : 100;
      p.hmcr = grid ? 0.9 : 0.8;
      p.par = grid ? 0.3 : 0.5;
      p.bandwidth = grid ? 0.1 : 0.3;
      return p;
    }
    case Algorithm::GA: return GeneticParams{};
    case Algorithm::RandomSearch: return RandomSearchParams{};
  }
  fail(ErrorCode::Configuration, "unknown algorithm");
}

void validate(const Hyperparams& params) {
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SaParams>) {
          check(p.initial_temperature > 0, "sa.initial_temperature must be > 0");
          check(p.cooling_rate > 0 && p.cooling_rate < 1, "sa.cooling_rate must be in (0,1)");
          check(p.stop_temperature > 0 && p.stop_temperature < p.initial_temperature,
                "sa.stop_temperature must be in (0, initial_temperature)");
          check(p.step_sigma > 0, "sa.step_sigma must be > 0");
        } else if constexpr (std::is_same_v<T, PsoParams>) {
          check(p.n_particles >= 1, "pso.n_particles must be >= 1");
          check(p.inertia >= 0 && p.cognitive >= 0 && p.social >= 0,
                "pso coefficients must be >= 0");
          check(p.v_max > 0, "pso.v_max must be > 0");
        } else if constexpr (std::is_same_v<T, AcoParams>) {
          check(p.n_ants >= 1, "aco.n_ants must be >= 1");
          check(unit(p.evaporation), "aco.evaporation must be in [0,1]");
          check(p.alpha >= 0 && p.beta >= 0, "aco.alpha/beta must be >= 0");
          check(p.mutation_sigma >= 0, "aco.mutation_sigma must be >= 0");
        } else if constexpr (std::is_same_v<T, TabuParams>) {
          check(p.tabu_size >= 1, "ts.tabu_size must be >= 1");
          check(p.neighborhood_size >= 1, "ts.neighborhood_size must be >= 1");
          check(p.step_sigma > 0, "ts.step_sigma must be > 0");
          check(p.fingerprint_decimals >= 0 && p.fingerprint_decimals <= 12,
                "ts.fingerprint_decimals must be in 0..12");
        } else if constexpr (std::is_same_v<T, HarmonyParams>) {
          check(p.memory_size >= 1, "hs.memory_size must be >= 1");
          check(unit(p.hmcr) && unit(p.par), "hs.hmcr/par must be in [0,1]");
          check(p.bandwidth >= 0, "hs.bandwidth must be >= 0");
        } else if constexpr (std::is_same_v<T, GeneticParams>) {
          check(p.population >= 2, "ga.population must be >= 2");
          check(p.top_k >= 1 && p.top_k < p.population, "ga.top_k must be in [1, population)");
          check(p.mutation_sigma >= 0, "ga.mutation_sigma must be >= 0");
        }
      },
      params);
}

nlohmann::json to_json(const Hyperparams& params) {
  nlohmann::ordered_json j;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SaParams>) {
          j = {{"initial_temperature", p.initial_temperature},
               {"cooling_rate", p.cooling_rate},
               {"stop_temperature", p.stop_temperature},
               {"step_sigma", p.step_sigma}};
        } else if constexpr (std::is_same_v<T, PsoParams>) {
          j = {{"n_particles", p.n_particles}, {"inertia", p.inertia},
               {"cognitive", p.cognitive},     {"social", p.social},
               {"v_max", p.v_max}};
        } else if constexpr (std::is_same_v<T, AcoParams>) {
          j = {{"n_ants", p.n_ants}, {"evaporation", p.evaporation}, {"alpha", p.alpha},
               {"beta", p.beta},     {"mutation_sigma", p.mutation_sigma}};
        } else if constexpr (std::is_same_v<T, TabuParams>) {
          j = {{"tabu_size", p.tabu_size},
               {"neighborhood_size", p.neighborhood_size},
               {"step_sigma", p.step_sigma},
               {"fingerprint_decimals", p.fingerprint_decimals}};
        } else if constexpr (std::is_same_v<T, HarmonyParams>) {
          j = {{"memory_size", p.memory_size}, {"hmcr", p.hmcr}, {"par", p.par},
               {"bandwidth", p.bandwidth}};
        } else if constexpr (std::is_same_v<T, GeneticParams>) {
          j = {{"population", p.population}, {"top_k", p.top_k},
               {"mutation_sigma", p.mutation_sigma}};
        } else {
          j = nlohmann::ordered_json::object();
        }
      },
      params);
  return nlohmann::json(j);
}

Hyperparams apply_overrides(Hyperparams params, const nlohmann::json& j) {
  if (j.is_null()) return params;
  require(j.is_object(), ErrorCode::Configuration, "hyperparameter overrides must be an object");
  std::size_t seen = 0;
  std::visit(
      [&](auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SaParams>) {
          read(j, "initial_temperature", p.initial_temperature, seen);
          read(j, "cooling_rate", p.cooling_rate, seen);
          read(j, "stop_temperature", p.stop_temperature, seen);
          read(j, "step_sigma", p.step_sigma, seen);
        } else if constexpr (std::is_same_v<T, PsoParams>) {
          read(j, "n_particles", p.n_particles, seen);
          read(j, "inertia", p.inertia, seen);
          read(j, "cognitive", p.cognitive, seen);
          read(j, "social", p.social, seen);
          read(j, "v_max", p.v_max, seen);
        } else if constexpr (std::is_same_v<T, AcoParams>) {
          read(j, "n_ants", p.n_ants, seen);
          read(j, "evaporation", p.evaporation, seen);
          read(j, "alpha", p.alpha, seen);
          read(j, "beta", p.beta, seen);
          read(j, "mutation_sigma", p.mutation_sigma, seen);
        } else if constexpr (std::is_same_v<T, TabuParams>) {
          read(j, "tabu_size", p.tabu_size, seen);
          read(j, "neighborhood_size", p.neighborhood_size, seen);
          read(j, "step_sigma", p.step_sigma, seen);
          read(j, "fingerprint_decimals", p.fingerprint_decimals, seen);
        } else if constexpr (std::is_same_v<T, HarmonyParams>) {
          read(j, "memory_size", p.memory_size, seen);
          read(j, "hmcr", p.hmcr, seen);
          read(j, "par", p.par, seen);
          read(j, "bandwidth", p.bandwidth, seen);
        } else if constexpr (std::is_same_v<T, GeneticParams>) {
          read(j, "population", p.population, seen);
          read(j, "top_k", p.top_k, seen);
          read(j, "mutation_sigma", p.mutation_sigma, seen);
        }
      },
      params);
  if (seen != j.size()) {
    const auto known = to_json(params);
    for (const auto& [key, _] : j.items())
      require(known.contains(key), ErrorCode::Configuration,
              "unknown hyperparameter '" + key + "' for " +
                  std::string(algorithm_name(algorithm_of(params))));
  }
  validate(params);
  return params;
}

}  // namespace mqrl::opt
