#include <algorithm>
#include <random>

#include "mqrl/optimizers.hpp"

namespace mqrl::opt {

ParticleSwarm::ParticleSwarm(const PsoParams& p, std::size_t dim, std::uint64_t seed,
                             double init_scale)
    : Optimizer(dim, seed, init_scale), p_(p) {}

double ParticleSwarm::velocity_update(double v, double x, double pbest, double gbest, double w,
                                      double c1, double c2, double r1, double r2, double v_max) {
  const double next = w * v + c1 * r1 * (pbest - x) + c2 * r2 * (gbest - x);
  return std::clamp(next, -v_max, v_max);
}

std::vector<Vector> ParticleSwarm::propose() {
  if (!started_) {
    x_.clear();
    for (std::size_t i = 0; i < p_.n_particles; ++i) x_.push_back(sample_init());
    v_.assign(p_.n_particles, Vector(dim(), 0.0));
    return x_;
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < x_.size(); ++i) {
    for (std::size_t d = 0; d < dim(); ++d) {
      const double r1 = u(rng());
      const double r2 = u(rng());
      v_[i][d] = velocity_update(v_[i][d], x_[i][d], pbest_[i][d], gbest_[d], p_.inertia,
                                 p_.cognitive, p_.social, r1, r2, p_.v_max);
      x_[i][d] += v_[i][d];
    }
  }
  return x_;
}

void ParticleSwarm::update(std::span<const Vector> candidates, std::span<const double> fitness) {
  if (!started_) {
    started_ = true;
    pbest_.assign(candidates.begin(), candidates.end());
    pbest_f_.assign(fitness.begin(), fitness.end());
    const auto best = std::max_element(fitness.begin(), fitness.end()) - fitness.begin();
    gbest_ = candidates[best];
    gbest_f_ = fitness[best];
    return;
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (fitness[i] > pbest_f_[i]) {
      pbest_f_[i] = fitness[i];
      pbest_[i] = candidates[i];
    }
    if (fitness[i] > gbest_f_) {
      gbest_f_ = fitness[i];
      gbest_ = candidates[i];
    }
  }
}

}  // namespace mqrl::opt
