#include <algorithm>
#include <numeric>
#include <random>

#include "mqrl/optimizers.hpp"

namespace mqrl::opt {

HarmonySearch::HarmonySearch(const HarmonyParams& p, std::size_t dim, std::uint64_t seed,
                             double init_scale)
    : Optimizer(dim, seed, init_scale), p_(p) {}

std::vector<Vector> HarmonySearch::propose() {
  if (!started_) {
    std::vector<Vector> memory;
    for (std::size_t i = 0; i < p_.memory_size; ++i) memory.push_back(sample_init());
    return memory;
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> pitch(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> member(0, memory_.size() - 1);
  std::normal_distribution<double> fresh(0.0, 1.0);

  Vector harmony(dim());
  for (std::size_t d = 0; d < dim(); ++d) {
    if (u(rng()) < p_.hmcr) {
      harmony[d] = memory_[member(rng())][d];
      if (u(rng()) < p_.par) harmony[d] += pitch(rng()) * p_.bandwidth;
    } else {
      harmony[d] = fresh(rng()) * init_scale();
    }
  }
  return {harmony};
}

void HarmonySearch::update(std::span<const Vector> candidates, std::span<const double> fitness) {
  if (!started_) {
    started_ = true;
    memory_.assign(candidates.begin(), candidates.end());
    memory_f_.assign(fitness.begin(), fitness.end());
    sort_memory();
    return;
  }
  if (fitness[0] > memory_f_.back()) {
    memory_.back() = candidates[0];
    memory_f_.back() = fitness[0];
    sort_memory();
  }
}

void HarmonySearch::sort_memory() {
  std::vector<std::size_t> order(memory_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return memory_f_[a] > memory_f_[b]; });
  std::vector<Vector> m;
  std::vector<double> f;
  m.reserve(order.size());
  f.reserve(order.size());
  for (std::size_t i : order) {
    m.push_back(std::move(memory_[i]));
    f.push_back(memory_f_[i]);
  }
  memory_ = std::move(m);
  memory_f_ = std::move(f);
}

}  // namespace mqrl::opt
