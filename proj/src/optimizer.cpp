#include <random>
#include <string>

#include "mqrl/error.hpp"
#include "mqrl/optimizers.hpp"

namespace mqrl::opt {

double Objective::evaluate(std::span<const double> x) {
  require(x.size() == dim_, ErrorCode::InvalidArgument,
          "objective expects dimension " + std::to_string(dim_) + ", got " +
              std::to_string(x.size()));
  return evaluate_at(x, ++count_);
}

std::vector<double> Objective::evaluate_batch(std::span<const Vector> candidates) {
  for (const auto& c : candidates)
    require(c.size() == dim_, ErrorCode::InvalidArgument,
            "objective expects dimension " + std::to_string(dim_) + ", got " +
                std::to_string(c.size()));
  const std::uint64_t first = count_ + 1;
  count_ += candidates.size();
  return evaluate_many(candidates, first);
}

std::vector<double> Objective::evaluate_many(std::span<const Vector> candidates,
                                             std::uint64_t first_index) {
  std::vector<double> out;
  out.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i)
    out.push_back(evaluate_at(candidates[i], first_index + i));
  return out;
}

Optimizer::Optimizer(std::size_t dim, std::uint64_t seed, double init_scale)
    : dim_(dim), init_scale_(init_scale), rng_(seed) {
  require(dim >= 1, ErrorCode::Configuration, "optimizer dimension must be >= 1");
  require(init_scale > 0.0, ErrorCode::Configuration, "init scale must be positive");
}

Vector Optimizer::sample_init() {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector x(dim_);
  for (double& v : x) v = normal(rng_) * init_scale_;
  return x;
}

std::vector<Vector> Optimizer::ask(std::size_t limit) {
  require(limit >= 1, ErrorCode::InvalidArgument, "ask() needs a positive limit");
  require(pending_.empty(), ErrorCode::State, "ask() called twice without tell()");
  pending_ = propose();
  pending_truncated_ = pending_.size() > limit;
  if (pending_truncated_) pending_.resize(limit);
  return pending_;
}

void Optimizer::tell(std::span<const double> fitness) {
  require(!pending_.empty(), ErrorCode::State, "tell() without a pending ask()");
  require(fitness.size() == pending_.size(), ErrorCode::InvalidArgument,
          "tell() expects " + std::to_string(pending_.size()) + " fitness values, got " +
              std::to_string(fitness.size()));
  if (!pending_truncated_) update(pending_, fitness);
  for (std::size_t i = 0; i < fitness.size(); ++i) {
    if (!has_best_ || fitness[i] > best_fitness_) {
      has_best_ = true;
      best_fitness_ = fitness[i];
      best_ = pending_[i];
    }
  }
  pending_.clear();
}

std::size_t step(Optimizer& optimizer, Objective& objective, std::size_t remaining) {
  if (remaining == 0) return 0;
  const auto candidates = optimizer.ask(remaining);
  const auto fitness = objective.evaluate_batch(candidates);
  optimizer.tell(fitness);
  return candidates.size();
}

void optimize(Optimizer& optimizer, Objective& objective, std::size_t budget) {
  std::size_t used = 0;
  while (used < budget) used += step(optimizer, objective, budget - used);
}

std::unique_ptr<Optimizer> make_optimizer(const Hyperparams& params, std::size_t dim,
                                          std::uint64_t seed, double init_scale) {
  validate(params);
  return std::visit(
      [&](const auto& p) -> std::unique_ptr<Optimizer> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SaParams>)
          return std::make_unique<SimulatedAnnealing>(p, dim, seed, init_scale);
        else if constexpr (std::is_same_v<T, PsoParams>)
          return std::make_unique<ParticleSwarm>(p, dim, seed, init_scale);
        else if constexpr (std::is_same_v<T, AcoParams>)
          return std::make_unique<AntColony>(p, dim, seed, init_scale);
        else if constexpr (std::is_same_v<T, TabuParams>)
          return std::make_unique<TabuSearch>(p, dim, seed, init_scale);
        else if constexpr (std::is_same_v<T, HarmonyParams>)
          return std::make_unique<HarmonySearch>(p, dim, seed, init_scale);
        else if constexpr (std::is_same_v<T, GeneticParams>)
          return std::make_unique<GeneticAlgorithm>(p, dim, seed, init_scale);
        else
          return std::make_unique<RandomSearch>(dim, seed, init_scale);
      },
      params);
}

}  // namespace mqrl::opt
