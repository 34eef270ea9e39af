#include <cmath>
#include <random>

#include "mqrl/optimizers.hpp"

namespace mqrl::opt {

std::uint64_t solution_fingerprint(std::span<const double> x, int decimals) {
  const double scale = std::pow(10.0, decimals);
  std::uint64_t h = 0x84222325cbf29ce4ULL;
  for (double v : x) {
    const auto q = static_cast<std::int64_t>(std::llround(v * scale));
    h = mix64(h ^ static_cast<std::uint64_t>(q));
  }
  return h;
}

void TabuList::insert(std::uint64_t fp) {
  order_.push_back(fp);
  members_.insert(fp);
  while (order_.size() > capacity_) {
    members_.erase(members_.find(order_.front()));
    order_.pop_front();
  }
}

TabuSearch::TabuSearch(const TabuParams& p, std::size_t dim, std::uint64_t seed,
                       double init_scale)
    : Optimizer(dim, seed, init_scale), p_(p), tabu_(p.tabu_size) {}

std::vector<Vector> TabuSearch::propose() {
  if (!started_) return {sample_init()};
  std::normal_distribution<double> step(0.0, p_.step_sigma);
  std::vector<Vector> neighbors(p_.neighborhood_size, current_);
  for (auto& n : neighbors)
    for (double& v : n) v += step(rng());
  return neighbors;
}

void TabuSearch::update(std::span<const Vector> candidates, std::span<const double> fitness) {
  if (!started_) {
    started_ = true;
    current_ = candidates[0];
    current_fitness_ = fitness[0];
    return;
  }
  const double previous = current_fitness_;
  std::vector<std::uint64_t> prints(candidates.size());
  std::ptrdiff_t chosen = -1;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    prints[i] = solution_fingerprint(candidates[i], p_.fingerprint_decimals);
    const bool aspirated = has_best() && fitness[i] > best_fitness();
    if (tabu_.contains(prints[i]) && !aspirated) continue;
    if (chosen < 0 || fitness[i] > fitness[chosen]) chosen = static_cast<std::ptrdiff_t>(i);
  }
  if (chosen >= 0) {
    current_ = candidates[chosen];
    current_fitness_ = fitness[chosen];
  }
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (fitness[i] < previous) tabu_.insert(prints[i]);
}

}  // namespace mqrl::opt
