#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mqrl/environments.hpp"
#include "mqrl/rng.hpp"

namespace mqrl::opt {

using Vector = std::vector<double>;

// ---------------------------------------------------------------- objective --

// Fitness is maximized. Every evaluated candidate advances eval_count by one.
class Objective {
 public:
  explicit Objective(std::size_t dim) : dim_(dim) {}
  virtual ~Objective() = default;

  std::size_t dim() const noexcept { return dim_; }
  std::uint64_t eval_count() const noexcept { return count_; }

  double evaluate(std::span<const double> x);
  std::vector<double> evaluate_batch(std::span<const Vector> candidates);

 protected:
  // eval_index is 1-based and dense across the lifetime of the objective.
  virtual double evaluate_at(std::span<const double> x, std::uint64_t eval_index) = 0;

  // Default is serial; overrides may evaluate concurrently but must return
  // results in candidate order.
  virtual std::vector<double> evaluate_many(std::span<const Vector> candidates,
                                            std::uint64_t first_index);

 private:
  std::size_t dim_;
  std::uint64_t count_ = 0;
};

class FunctionObjective final : public Objective {
 public:
  using Fn = std::function<double(std::span<const double>)>;
  FunctionObjective(std::size_t dim, Fn fn) : Objective(dim), fn_(std::move(fn)) {}

 protected:
  double evaluate_at(std::span<const double> x, std::uint64_t) override { return fn_(x); }

 private:
  Fn fn_;
};

// ------------------------------------------------------------ hyperparams --

enum class Algorithm { SA, PSO, ACO, TS, HS, GA, RandomSearch };

std::string_view algorithm_name(Algorithm algo);
Algorithm parse_algorithm(std::string_view name);

struct SaParams {
  double initial_temperature = 3000.0;
  double cooling_rate = 0.001;
  double stop_temperature = 0.001;
  double step_sigma = 0.05;
};

struct PsoParams {
  std::size_t n_particles = 20;
  double inertia = 0.4;
  double cognitive = 1.0;
  double social = 1.5;
  double v_max = 0.5;
};

struct AcoParams {
  std::size_t n_ants = 10;
  double evaporation = 0.9;
  double alpha = 0.5;
  double beta = 0.3;
  double mutation_sigma = 0.1;
};

struct TabuParams {
  std::size_t tabu_size = 7;
  std::size_t neighborhood_size = 20;
  double step_sigma = 0.05;
  int fingerprint_decimals = 3;
};

struct HarmonyParams {
  std::size_t memory_size = 30;
  double hmcr = 0.9;  // memory consideration ("acceptance") rate
  double par = 0.3;   // pitch adjustment rate
  double bandwidth = 0.1;
};

struct GeneticParams {
  std::size_t population = 500;
  std::size_t top_k = 10;
  double mutation_sigma = 0.02;
};

struct RandomSearchParams {};

using Hyperparams = std::variant<SaParams, PsoParams, AcoParams, TabuParams, HarmonyParams,
                                 GeneticParams, RandomSearchParams>;

Algorithm algorithm_of(const Hyperparams& params);

// Tuned per-environment defaults.
Hyperparams default_hyperparams(Algorithm algo, env::EnvKind env);

// Throws Configuration on non-positive sizes/scales or probabilities outside
// [0, 1].
void validate(const Hyperparams& params);

nlohmann::json to_json(const Hyperparams& params);
// Unknown keys are a configuration error.
Hyperparams apply_overrides(Hyperparams params, const nlohmann::json& overrides);

// ---------------------------------------------------------------- optimizer --

// Ask/tell interface. ask() returns the next candidates (never more than
// `limit`); tell() receives their fitness in the same order.
class Optimizer {
 public:
  Optimizer(std::size_t dim, std::uint64_t seed, double init_scale);
  virtual ~Optimizer() = default;

  virtual Algorithm algorithm() const = 0;

  std::vector<Vector> ask(std::size_t limit);
  void tell(std::span<const double> fitness);

  std::size_t dim() const noexcept { return dim_; }
  bool has_best() const noexcept { return has_best_; }
  const Vector& best_genome() const noexcept { return best_; }
  double best_fitness() const noexcept { return best_fitness_; }

 protected:
  // Full batch for the next step. The base class truncates it to the caller's
  // limit; a truncated batch only updates the global best.
  virtual std::vector<Vector> propose() = 0;
  // Runs before the global best absorbs the batch.
  virtual void update(std::span<const Vector> candidates, std::span<const double> fitness) = 0;

  // N(0, 1) * init_scale per coordinate.
  Vector sample_init();
  double init_scale() const noexcept { return init_scale_; }
  Rng& rng() noexcept { return rng_; }

 private:
  std::size_t dim_;
  double init_scale_;
  Rng rng_;
  std::vector<Vector> pending_;
  bool pending_truncated_ = false;
  bool has_best_ = false;
  Vector best_;
  double best_fitness_ = 0.0;
};

// One ask/evaluate/tell round bounded by `remaining`; returns evaluations used.
std::size_t step(Optimizer& optimizer, Objective& objective, std::size_t remaining);
// Runs until exactly `budget` evaluations have been consumed.
void optimize(Optimizer& optimizer, Objective& objective, std::size_t budget);

std::unique_ptr<Optimizer> make_optimizer(const Hyperparams& params, std::size_t dim,
                                          std::uint64_t seed, double init_scale = 0.01);

// ---------------------------------------------------------------- algorithms --

class SimulatedAnnealing final : public Optimizer {
 public:
  SimulatedAnnealing(const SaParams& p, std::size_t dim, std::uint64_t seed, double init_scale);
  Algorithm algorithm() const override { return Algorithm::SA; }

  // exp(delta / T) for delta < 0, else 1.
  static double acceptance_probability(double delta, double temperature);

  double temperature() const noexcept { return temperature_; }
  const Vector& current() const noexcept { return current_; }
  double current_fitness() const noexcept { return current_fitness_; }
  std::size_t reheats() const noexcept { return reheats_; }

 protected:
  std::vector<Vector> propose() override;
  void update(std::span<const Vector> candidates, std::span<const double> fitness) override;

 private:
  SaParams p_;
  double temperature_;
  bool started_ = false;
  Vector current_;
  double current_fitness_ = 0.0;
  std::size_t reheats_ = 0;
};

class ParticleSwarm final : public Optimizer {
 public:
  ParticleSwarm(const PsoParams& p, std::size_t dim, std::uint64_t seed, double init_scale);
  Algorithm algorithm() const override { return Algorithm::PSO; }

  // v' = w v + c1 r1 (pbest - x) + c2 r2 (gbest - x), clamped to [-v_max, v_max].
  static double velocity_update(double v, double x, double pbest, double gbest, double w,
                                double c1, double c2, double r1, double r2, double v_max);

  const std::vector<Vector>& positions() const noexcept { return x_; }
  const std::vector<Vector>& velocities() const noexcept { return v_; }
  const Vector& swarm_best() const noexcept { return gbest_; }

 protected:
  std::vector<Vector> propose() override;
  void update(std::span<const Vector> candidates, std::span<const double> fitness) override;

 private:
  PsoParams p_;
  bool started_ = false;
  std::vector<Vector> x_, v_, pbest_;
  std::vector<double> pbest_f_;
  Vector gbest_;
  double gbest_f_ = 0.0;
};

// Heuristic desirability eta_j = (f_j - f_min) / (f_max - f_min + 1e-12).
std::vector<double> aco_heuristic(std::span<const double> fitness);
// p_j proportional to (sum_i tau_ij)^alpha * (eta_j + 1e-12)^beta; tau is
// row-major n x n.
std::vector<double> aco_selection_probabilities(std::span<const double> tau,
                                                std::span<const double> eta, double alpha,
                                                double beta);
// tau <- (1 - rho) tau, then column j += eta_j once per sampled source j.
void aco_update_pheromone(std::span<double> tau, std::span<const std::size_t> sources,
                          std::span<const double> eta, double rho);

class AntColony final : public Optimizer {
 public:
  AntColony(const AcoParams& p, std::size_t dim, std::uint64_t seed, double init_scale);
  Algorithm algorithm() const override { return Algorithm::ACO; }

  const std::vector<double>& pheromone() const noexcept { return tau_; }
  const std::vector<double>& colony_fitness() const noexcept { return fitness_; }

 protected:
  std::vector<Vector> propose() override;
  void update(std::span<const Vector> candidates, std::span<const double> fitness) override;

 private:
  AcoParams p_;
  bool started_ = false;
  std::vector<Vector> colony_;
  std::vector<double> fitness_;
  std::vector<double> tau_;
  std::vector<std::size_t> sources_;
};

// Coordinates rounded to `decimals` places, hashed.
std::uint64_t solution_fingerprint(std::span<const double> x, int decimals);

// FIFO set of fingerprints with fixed capacity.
class TabuList {
 public:
  explicit TabuList(std::size_t capacity) : capacity_(capacity) {}
  bool contains(std::uint64_t fp) const { return members_.count(fp) != 0; }
  void insert(std::uint64_t fp);
  std::size_t size() const noexcept { return order_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }

 private:
  std::size_t capacity_;
  std::deque<std::uint64_t> order_;
  std::unordered_multiset<std::uint64_t> members_;
};

class TabuSearch final : public Optimizer {
 public:
  TabuSearch(const TabuParams& p, std::size_t dim, std::uint64_t seed, double init_scale);
  Algorithm algorithm() const override { return Algorithm::TS; }

  const Vector& current() const noexcept { return current_; }
  double current_fitness() const noexcept { return current_fitness_; }
  const TabuList& tabu() const noexcept { return tabu_; }
  TabuList& tabu() noexcept { return tabu_; }

 protected:
  std::vector<Vector> propose() override;
  void update(std::span<const Vector> candidates, std::span<const double> fitness) override;

 private:
  TabuParams p_;
  TabuList tabu_;
  bool started_ = false;
  Vector current_;
  double current_fitness_ = 0.0;
};

class HarmonySearch final : public Optimizer {
 public:
  HarmonySearch(const HarmonyParams& p, std::size_t dim, std::uint64_t seed, double init_scale);
  Algorithm algorithm() const override { return Algorithm::HS; }

  // Sorted best first.
  const std::vector<Vector>& memory() const noexcept { return memory_; }
  const std::vector<double>& memory_fitness() const noexcept { return memory_f_; }

 protected:
  std::vector<Vector> propose() override;
  void update(std::span<const Vector> candidates, std::span<const double> fitness) override;

 private:
  void sort_memory();

  HarmonyParams p_;
  bool started_ = false;
  std::vector<Vector> memory_;
  std::vector<double> memory_f_;
};

class GeneticAlgorithm final : public Optimizer {
 public:
  GeneticAlgorithm(const GeneticParams& p, std::size_t dim, std::uint64_t seed,
                   double init_scale);
  Algorithm algorithm() const override { return Algorithm::GA; }

  const std::vector<Vector>& population() const noexcept { return pop_; }
  const std::vector<double>& population_fitness() const noexcept { return pop_f_; }

 protected:
  std::vector<Vector> propose() override;
  void update(std::span<const Vector> candidates, std::span<const double> fitness) override;

 private:
  GeneticParams p_;
  bool started_ = false;
  std::vector<Vector> pop_;
  std::vector<double> pop_f_;
};

class RandomSearch final : public Optimizer {
 public:
  RandomSearch(std::size_t dim, std::uint64_t seed, double init_scale)
      : Optimizer(dim, seed, init_scale) {}
  Algorithm algorithm() const override { return Algorithm::RandomSearch; }

 protected:
  std::vector<Vector> propose() override { return {sample_init()}; }
  void update(std::span<const Vector>, std::span<const double>) override {}
};

}  // namespace mqrl::opt
