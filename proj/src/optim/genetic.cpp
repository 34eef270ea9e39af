#include <algorithm>
#include <numeric>
#include <random>

#include "mqrl/optimizers.hpp"

namespace mqrl::opt {

GeneticAlgorithm::GeneticAlgorithm(const GeneticParams& p, std::size_t dim, std::uint64_t seed,
                                   double init_scale)
    : Optimizer(dim, seed, init_scale), p_(p) {}

std::vector<Vector> GeneticAlgorithm::propose() {
  if (!started_) {
    std::vector<Vector> pop;
    for (std::size_t i = 0; i < p_.population; ++i) pop.push_back(sample_init());
    return pop;
  }
  // pop_ is sorted best first after update(), so the elites are its prefix.
  std::uniform_int_distribution<std::size_t> parent(0, p_.top_k - 1);
  std::normal_distribution<double> mutate(0.0, p_.mutation_sigma);
  std::vector<Vector> offspring;
  offspring.reserve(p_.population - p_.top_k);
  for (std::size_t i = p_.top_k; i < p_.population; ++i) {
    Vector child = pop_[parent(rng())];
    if (p_.mutation_sigma > 0.0)
      for (double& v : child) v += mutate(rng());
    offspring.push_back(std::move(child));
  }
  return offspring;
}

void GeneticAlgorithm::update(std::span<const Vector> candidates,
                              std::span<const double> fitness) {
  if (!started_) {
    started_ = true;
    pop_.assign(candidates.begin(), candidates.end());
    pop_f_.assign(fitness.begin(), fitness.end());
  } else {
    pop_.resize(p_.top_k);
    pop_f_.resize(p_.top_k);
    pop_.insert(pop_.end(), candidates.begin(), candidates.end());
    pop_f_.insert(pop_f_.end(), fitness.begin(), fitness.end());
  }
  std::vector<std::size_t> order(pop_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pop_f_[a] > pop_f_[b]; });
  std::vector<Vector> sorted;
  std::vector<double> sorted_f;
  sorted.reserve(order.size());
  sorted_f.reserve(order.size());
  for (std::size_t i : order) {
    sorted.push_back(std::move(pop_[i]));
    sorted_f.push_back(pop_f_[i]);
  }
  pop_ = std::move(sorted);
  pop_f_ = std::move(sorted_f);
}

}  // namespace mqrl::opt
