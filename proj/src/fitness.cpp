#include <map>
#include <memory>
#include <random>
#include <string>

#include "mqrl/error.hpp"
#include "mqrl/harness.hpp"

namespace mqrl::harness {

RolloutResult rollout(env::Environment& environment, const PolicyFn& policy, Rng& rng,
                      std::ostream* trajectory) {
  auto obs = environment.reset(rng());
  RolloutResult result;
  while (true) {
    const int action = policy(obs, rng);
    auto t = environment.step(action);
    result.total_reward += t.reward;
    ++result.steps;
    if (trajectory) env::write_trajectory_row(*trajectory, result.steps, action, t.reward, t.done);
    if (t.done) break;
    obs = std::move(t.obs);
  }
  return result;
}

std::uint64_t rollout_seed(std::uint64_t seed, std::uint64_t eval_index, int r) {
  return derive_seed({seed, eval_index, static_cast<std::uint64_t>(r)});
}

double evaluate_policy(const PolicyFn& policy, env::EnvKind kind, int episodes,
                       std::uint64_t seed, std::uint64_t eval_index) {
  require(episodes >= 1, ErrorCode::Configuration, "episodes per evaluation must be >= 1");
  auto environment = env::make_environment(kind);
  double total = 0.0;
  for (int r = 0; r < episodes; ++r) {
    Rng rng(rollout_seed(seed, eval_index, r));
    total += rollout(*environment, policy, rng).total_reward;
  }
  return total / episodes;
}

PolicyFn make_genome_policy(const policy::Genome& genome) {
  auto compiled = std::make_shared<const policy::VqcPolicy>(genome);
  if (genome.layout() == policy::Layout::CartPole) {
    return [compiled](std::span<const double> obs, Rng& rng) {
      return policy::select_action(compiled->forward(obs), rng);
    };
  }
  // The MiniGrid observation space is tiny (position x direction), so each
  // distinct observation only needs one circuit simulation per genome.
  using Memo = std::map<std::vector<double>, policy::ActionDistribution, std::less<>>;
  auto memo = std::make_shared<Memo>();
  return [compiled, memo](std::span<const double> obs, Rng& rng) {
    std::vector<double> key(obs.begin(), obs.end());
    auto it = memo->find(key);
    if (it == memo->end()) it = memo->emplace(std::move(key), compiled->forward(obs)).first;
    return policy::select_action(it->second, rng);
  };
}

double evaluate_fitness(const policy::Genome& genome, env::EnvKind kind, int episodes,
                        std::uint64_t seed, std::uint64_t eval_index) {
  const bool match = (kind == env::EnvKind::MiniGrid) == (genome.layout() == policy::Layout::MiniGrid);
  require(match, ErrorCode::InvalidArgument,
          "genome layout '" + std::string(policy::layout_name(genome.layout())) +
              "' does not match environment '" + std::string(env::env_name(kind)) + "'");
  return evaluate_policy(make_genome_policy(genome), kind, episodes, seed, eval_index);
}

double random_policy_fitness(env::EnvKind kind, int episodes, std::uint64_t seed,
                             std::uint64_t eval_index) {
  const int n_actions = kind == env::EnvKind::MiniGrid ? env::minigrid::kNumActions : 2;
  const PolicyFn uniform = [n_actions](std::span<const double>, Rng& rng) {
    return std::uniform_int_distribution<int>(0, n_actions - 1)(rng);
  };
  return evaluate_policy(uniform, kind, episodes, seed, eval_index);
}

}  // namespace mqrl::harness
