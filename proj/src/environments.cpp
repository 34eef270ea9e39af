#include "mqrl/environments.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "mqrl/error.hpp"
#include "mqrl/rng.hpp"

namespace mqrl::env {

std::string_view env_name(EnvKind kind) {
  return kind == EnvKind::MiniGrid ? "minigrid5x5" : "cartpole";
}

EnvKind parse_env(std::string_view name) {
  if (name == "minigrid5x5" || name == "minigrid") return EnvKind::MiniGrid;
  if (name == "cartpole") return EnvKind::CartPole;
  fail(ErrorCode::Configuration, "unknown environment '" + std::string(name) + "'");
}

// ---------------------------------------------------------------- MiniGrid --

namespace {

using namespace minigrid;

bool is_wall(int x, int y) { return x <= 0 || y <= 0 || x >= kSize - 1 || y >= kSize - 1; }

}  // namespace

Observation encode_minigrid_obs(const MiniGridState& state) {
  using P = Palette;
  Observation obs(kObsDim);
  for (int y = 0; y < kSize; ++y) {
    for (int x = 0; x < kSize; ++x) {
      int object = P::kEmpty, color = P::kEmptyColor, cell_state = 0;
      if (x == state.x && y == state.y) {
        object = P::kAgent;
        color = P::kAgentColor;
        cell_state = state.dir;
      } else if (is_wall(x, y)) {
        object = P::kWall;
        color = P::kWallColor;
      } else if (x == kGoalX && y == kGoalY) {
        object = P::kGoal;
        color = P::kGoalColor;
      }
      double* cell = &obs[(y * kSize + x) * 3];
      cell[0] = object / P::kChannelMax[0];
      cell[1] = color / P::kChannelMax[1];
      cell[2] = cell_state / P::kChannelMax[2];
    }
  }
  return obs;
}

StepOutcome<MiniGridState> minigrid_reset(std::uint64_t /*seed*/) {
  MiniGridState s;
  return {s, encode_minigrid_obs(s), 0.0, false};
}

StepOutcome<MiniGridState> minigrid_step(const MiniGridState& state, int action) {
  require(!state.done, ErrorCode::State, "MiniGrid: step after episode end");
  require(action >= 0 && action < kNumActions, ErrorCode::InvalidArgument,
          "MiniGrid: action must be in 0..5, got " + std::to_string(action));
  MiniGridState next = state;
  ++next.step_count;
  double reward = 0.0;

  switch (action) {
    case TurnLeft: next.dir = (next.dir + 3) % 4; break;
    case TurnRight: next.dir = (next.dir + 1) % 4; break;
    case Forward: {
      const int fx = next.x + kDirVec[next.dir][0];
      const int fy = next.y + kDirVec[next.dir][1];
      if (!is_wall(fx, fy)) {
        next.x = fx;
        next.y = fy;
      }
      if (next.x == kGoalX && next.y == kGoalY) {
        next.done = true;
        reward = 1.0 - 0.9 * (static_cast<double>(next.step_count) / kMaxSteps);
      }
      break;
    }
    default: break;  // pickup/drop/toggle: nothing to interact with
  }
  if (next.step_count >= kMaxSteps) next.done = true;
  return {next, encode_minigrid_obs(next), reward, next.done};
}

// ---------------------------------------------------------------- CartPole --

CartPoleState cartpole_integrate(const CartPoleState& s, double force) {
  using namespace cartpole;
  const double cos_t = std::cos(s.theta);
  const double sin_t = std::sin(s.theta);
  const double temp = (force + kPoleMassLength * s.theta_dot * s.theta_dot * sin_t) / kTotalMass;
  const double theta_acc = (kGravity * sin_t - cos_t * temp) /
                           (kHalfLength * (4.0 / 3.0 - kPoleMass * cos_t * cos_t / kTotalMass));
  const double x_acc = temp - kPoleMassLength * theta_acc * cos_t / kTotalMass;

  CartPoleState next = s;
  next.x = s.x + kTau * s.x_dot;
  next.x_dot = s.x_dot + kTau * x_acc;
  next.theta = s.theta + kTau * s.theta_dot;
  next.theta_dot = s.theta_dot + kTau * theta_acc;
  return next;
}

bool cartpole_out_of_bounds(const CartPoleState& s) {
  return s.x < -cartpole::kXThreshold || s.x > cartpole::kXThreshold ||
         s.theta < -cartpole::kThetaThreshold || s.theta > cartpole::kThetaThreshold;
}

namespace {

Observation cartpole_obs(const CartPoleState& s) { return {s.x, s.x_dot, s.theta, s.theta_dot}; }

}  // namespace

StepOutcome<CartPoleState> cartpole_reset(std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-cartpole::kInitRange, cartpole::kInitRange);
  CartPoleState s;
  s.x = u(rng);
  s.x_dot = u(rng);
  s.theta = u(rng);
  s.theta_dot = u(rng);
  return {s, cartpole_obs(s), 0.0, false};
}

StepOutcome<CartPoleState> cartpole_step(const CartPoleState& state, int action) {
  require(!state.done, ErrorCode::State, "CartPole: step after episode end");
  require(action == 0 || action == 1, ErrorCode::InvalidArgument,
          "CartPole: action must be 0 or 1, got " + std::to_string(action));
  const double force = action == 1 ? cartpole::kForceMag : -cartpole::kForceMag;
  CartPoleState next = cartpole_integrate(state, force);
  ++next.step_count;
  next.done = cartpole_out_of_bounds(next) || next.step_count >= cartpole::kMaxSteps;
  return {next, cartpole_obs(next), 1.0, next.done};
}

// ------------------------------------------------------- uniform interface --

Observation MiniGridEnv::reset(std::uint64_t seed) {
  auto r = minigrid_reset(seed);
  state_ = r.state;
  return std::move(r.obs);
}

Transition MiniGridEnv::step(int action) {
  auto r = minigrid_step(state_, action);
  state_ = r.state;
  return {std::move(r.obs), r.reward, r.done};
}

Observation CartPoleEnv::reset(std::uint64_t seed) {
  auto r = cartpole_reset(seed);
  state_ = r.state;
  return std::move(r.obs);
}

Transition CartPoleEnv::step(int action) {
  auto r = cartpole_step(state_, action);
  state_ = r.state;
  return {std::move(r.obs), r.reward, r.done};
}

std::unique_ptr<Environment> make_environment(EnvKind kind) {
  if (kind == EnvKind::MiniGrid) return std::make_unique<MiniGridEnv>();
  return std::make_unique<CartPoleEnv>();
}

void write_trajectory_header(std::ostream& out) { out << "step,action,reward,done\n"; }

void write_trajectory_row(std::ostream& out, int step, int action, double reward, bool done) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", reward);
  out << step << ',' << action << ',' << buf << ',' << (done ? 1 : 0) << '\n';
}

}  // namespace mqrl::env
