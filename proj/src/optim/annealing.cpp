#include <cmath>
#include <random>

#include "mqrl/optimizers.hpp"

namespace mqrl::opt {

SimulatedAnnealing::SimulatedAnnealing(const SaParams& p, std::size_t dim, std::uint64_t seed,
                                       double init_scale)
    : Optimizer(dim, seed, init_scale), p_(p), temperature_(p.initial_temperature) {}

double SimulatedAnnealing::acceptance_probability(double delta, double temperature) {
  if (delta >= 0.0) return 1.0;
  return std::exp(delta / temperature);
}

std::vector<Vector> SimulatedAnnealing::propose() {
  if (!started_) return {sample_init()};
  std::normal_distribution<double> step(0.0, p_.step_sigma);
  Vector neighbor = current_;
  for (double& v : neighbor) v += step(rng());
  return {neighbor};
}

void SimulatedAnnealing::update(std::span<const Vector> candidates,
                                std::span<const double> fitness) {
  if (!started_) {
    started_ = true;
    current_ = candidates[0];
    current_fitness_ = fitness[0];
    return;
  }
  const double delta = fitness[0] - current_fitness_;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // Draw unconditionally so the random stream does not depend on the outcome.
  const double draw = u(rng());
  if (delta >= 0.0 || draw < acceptance_probability(delta, temperature_)) {
    current_ = candidates[0];
    current_fitness_ = fitness[0];
  }
  temperature_ *= 1.0 - p_.cooling_rate;
  if (temperature_ < p_.stop_temperature) {
    // Reheat from the best solution so the run can use its whole budget.
    temperature_ = p_.initial_temperature;
    ++reheats_;
    if (has_best() && best_fitness() > current_fitness_) {
      current_ = best_genome();
      current_fitness_ = best_fitness();
    }
  }
}

}  // namespace mqrl::opt
