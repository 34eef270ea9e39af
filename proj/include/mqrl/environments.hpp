#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <ostream>
#include <string_view>
#include <vector>

namespace mqrl::env {

using Observation = std::vector<double>;

enum class EnvKind { MiniGrid, CartPole };

std::string_view env_name(EnvKind kind);
EnvKind parse_env(std::string_view name);

// ---------------------------------------------------------------- MiniGrid --

namespace minigrid {

inline constexpr int kSize = 5;
inline constexpr int kMaxSteps = 100;  // 4 * size^2
inline constexpr int kNumActions = 6;
inline constexpr int kObsDim = kSize * kSize * 3;
inline constexpr int kStartX = 1, kStartY = 1, kGoalX = 3, kGoalY = 3;

enum Action : int { TurnLeft = 0, TurnRight = 1, Forward = 2, Pickup = 3, Drop = 4, Toggle = 5 };

// Direction 0 = east (+x), 1 = south (+y), 2 = west, 3 = north.
inline constexpr std::array<std::array<int, 2>, 4> kDirVec = {{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};

// Observation palette; swap here to change the encoding.
struct Palette {
  static constexpr int kEmpty = 1, kWall = 2, kGoal = 8, kAgent = 10;
  static constexpr int kRed = 0, kGreen = 1, kGrey = 5;
  static constexpr int kEmptyColor = 0, kWallColor = kGrey, kGoalColor = kGreen, kAgentColor = kRed;
  static constexpr std::array<double, 3> kChannelMax = {10.0, 5.0, 3.0};
};

}  // namespace minigrid

struct MiniGridState {
  int x = minigrid::kStartX;
  int y = minigrid::kStartY;
  int dir = 0;
  int step_count = 0;
  bool done = false;

  friend bool operator==(const MiniGridState&, const MiniGridState&) = default;
};

template <class State>
struct StepOutcome {
  State state;
  Observation obs;
  double reward = 0.0;
  bool done = false;
};

// Full 5x5 grid, row-major (y outer, x inner), three interleaved channels per
// cell (object, color, state), each divided by its channel maximum.
Observation encode_minigrid_obs(const MiniGridState& state);

// Empty 5x5 has no random layout; the seed is accepted for interface symmetry.
StepOutcome<MiniGridState> minigrid_reset(std::uint64_t seed = 0);
StepOutcome<MiniGridState> minigrid_step(const MiniGridState& state, int action);

// ---------------------------------------------------------------- CartPole --

namespace cartpole {

inline constexpr double kGravity = 9.8;
inline constexpr double kCartMass = 1.0;
inline constexpr double kPoleMass = 0.1;
inline constexpr double kTotalMass = kCartMass + kPoleMass;
inline constexpr double kHalfLength = 0.5;
inline constexpr double kPoleMassLength = kPoleMass * kHalfLength;
inline constexpr double kForceMag = 10.0;
inline constexpr double kTau = 0.02;
inline constexpr double kThetaThreshold = 12.0 * 2.0 * 3.14159265358979323846 / 360.0;
inline constexpr double kXThreshold = 2.4;
inline constexpr int kMaxSteps = 500;
inline constexpr double kInitRange = 0.05;

}  // namespace cartpole

struct CartPoleState {
  double x = 0.0;
  double x_dot = 0.0;
  double theta = 0.0;
  double theta_dot = 0.0;
  int step_count = 0;
  bool done = false;

  friend bool operator==(const CartPoleState&, const CartPoleState&) = default;
};

// One explicit Euler step of the cart-pole equations under `force` newtons.
// Only the four kinematic fields are updated.
CartPoleState cartpole_integrate(const CartPoleState& state, double force);

bool cartpole_out_of_bounds(const CartPoleState& state);

StepOutcome<CartPoleState> cartpole_reset(std::uint64_t seed);
StepOutcome<CartPoleState> cartpole_step(const CartPoleState& state, int action);

// ------------------------------------------------------- uniform interface --

struct Transition {
  Observation obs;
  double reward = 0.0;
  bool done = false;
};

class Environment {
 public:
  virtual ~Environment() = default;
  virtual EnvKind kind() const = 0;
  virtual int num_actions() const = 0;
  virtual std::size_t obs_dim() const = 0;
  virtual Observation reset(std::uint64_t seed) = 0;
  virtual Transition step(int action) = 0;
  virtual bool done() const = 0;
};

class MiniGridEnv final : public Environment {
 public:
  EnvKind kind() const override { return EnvKind::MiniGrid; }
  int num_actions() const override { return minigrid::kNumActions; }
  std::size_t obs_dim() const override { return minigrid::kObsDim; }
  Observation reset(std::uint64_t seed) override;
  Transition step(int action) override;
  bool done() const override { return state_.done; }
  const MiniGridState& state() const noexcept { return state_; }

 private:
  MiniGridState state_{};
};

class CartPoleEnv final : public Environment {
 public:
  EnvKind kind() const override { return EnvKind::CartPole; }
  int num_actions() const override { return 2; }
  std::size_t obs_dim() const override { return 4; }
  Observation reset(std::uint64_t seed) override;
  Transition step(int action) override;
  bool done() const override { return state_.done; }
  const CartPoleState& state() const noexcept { return state_; }

 private:
  CartPoleState state_{};
};

std::unique_ptr<Environment> make_environment(EnvKind kind);

// Writes the trajectory CSV header: step,action,reward,done
void write_trajectory_header(std::ostream& out);
void write_trajectory_row(std::ostream& out, int step, int action, double reward, bool done);

}  // namespace mqrl::env
