#include <algorithm>
#include <cmath>
#include <random>

#include "mqrl/error.hpp"
#include "mqrl/optimizers.hpp"

namespace mqrl::opt {

std::vector<double> aco_heuristic(std::span<const double> fitness) {
  const auto [lo, hi] = std::minmax_element(fitness.begin(), fitness.end());
  std::vector<double> eta(fitness.size());
  for (std::size_t j = 0; j < fitness.size(); ++j)
    eta[j] = (fitness[j] - *lo) / (*hi - *lo + 1e-12);
  return eta;
}

std::vector<double> aco_selection_probabilities(std::span<const double> tau,
                                                std::span<const double> eta, double alpha,
                                                double beta) {
  const std::size_t n = eta.size();
  require(tau.size() == n * n, ErrorCode::InvalidArgument, "pheromone matrix must be n x n");
  std::vector<double> w(n, 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double column = 0.0;
    for (std::size_t i = 0; i < n; ++i) column += tau[i * n + j];
    w[j] = std::pow(column, alpha) * std::pow(eta[j] + 1e-12, beta);
    total += w[j];
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(n));
    return w;
  }
  for (double& v : w) v /= total;
  return w;
}

void aco_update_pheromone(std::span<double> tau, std::span<const std::size_t> sources,
                          std::span<const double> eta, double rho) {
  const std::size_t n = eta.size();
  for (double& t : tau) t *= 1.0 - rho;
  for (std::size_t j : sources)
    for (std::size_t i = 0; i < n; ++i) tau[i * n + j] += eta[j];
}

AntColony::AntColony(const AcoParams& p, std::size_t dim, std::uint64_t seed, double init_scale)
    : Optimizer(dim, seed, init_scale), p_(p), tau_(p.n_ants * p.n_ants, 1.0) {}

std::vector<Vector> AntColony::propose() {
  if (!started_) {
    std::vector<Vector> ants;
    for (std::size_t i = 0; i < p_.n_ants; ++i) ants.push_back(sample_init());
    return ants;
  }
  const auto eta = aco_heuristic(fitness_);
  const auto probs = aco_selection_probabilities(tau_, eta, p_.alpha, p_.beta);
  std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());
  std::normal_distribution<double> mutate(0.0, p_.mutation_sigma);

  sources_.clear();
  std::vector<Vector> next;
  next.reserve(p_.n_ants);
  for (std::size_t k = 0; k < p_.n_ants; ++k) {
    const std::size_t src = pick(rng());
    sources_.push_back(src);
    Vector ant = colony_[src];
    if (p_.mutation_sigma > 0.0)
      for (double& v : ant) v += mutate(rng());
    next.push_back(std::move(ant));
  }
  return next;
}

void AntColony::update(std::span<const Vector> candidates, std::span<const double> fitness) {
  if (started_) aco_update_pheromone(tau_, sources_, aco_heuristic(fitness_), p_.evaporation);
  started_ = true;
  colony_.assign(candidates.begin(), candidates.end());
  fitness_.assign(fitness.begin(), fitness.end());
}

}  // namespace mqrl::opt
