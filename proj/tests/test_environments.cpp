#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "mqrl/environments.hpp"
#include "mqrl/error.hpp"
#include "mqrl/rng.hpp"
#include "oracles/cartpole_scalar.hpp"

using namespace mqrl;
using namespace mqrl::env;

namespace {

std::size_t cell(int x, int y) { return static_cast<std::size_t>((y * 5 + x) * 3); }

}  // namespace

TEST_CASE("MiniGrid reset") {
  const auto r = minigrid_reset(123);
  CHECK(r.state.x == 1);
  CHECK(r.state.y == 1);
  CHECK(r.state.dir == 0);
  CHECK(r.state.step_count == 0);
  CHECK_FALSE(r.state.done);
  CHECK(r.obs.size() == 75);
  CHECK(r.obs == minigrid_reset(7).obs);
}

TEST_CASE("MiniGrid observation encoding") {
  const auto obs = minigrid_reset().obs;
  for (double v : obs) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  // wall (object 2, grey 5, state 0)
  CHECK(obs[cell(0, 0)] == doctest::Approx(0.2));
  CHECK(obs[cell(0, 0) + 1] == doctest::Approx(1.0));
  CHECK(obs[cell(0, 0) + 2] == 0.0);
  // agent at (1,1) facing east, red
  CHECK(obs[cell(1, 1)] == doctest::Approx(1.0));
  CHECK(obs[cell(1, 1) + 1] == 0.0);
  CHECK(obs[cell(1, 1) + 2] == 0.0);
  // goal, green
  CHECK(obs[cell(3, 3)] == doctest::Approx(0.8));
  CHECK(obs[cell(3, 3) + 1] == doctest::Approx(0.2));
  // empty
  CHECK(obs[cell(2, 2)] == doctest::Approx(0.1));

  MiniGridState s;
  s.dir = 3;
  CHECK(encode_minigrid_obs(s)[cell(1, 1) + 2] == doctest::Approx(1.0));
}

TEST_CASE("MiniGrid moving changes exactly the two affected cells") {
  auto r = minigrid_reset();
  const auto t = minigrid_step(r.state, minigrid::Forward);
  std::vector<std::size_t> changed;
  for (std::size_t i = 0; i < 75; ++i)
    if (r.obs[i] != t.obs[i]) changed.push_back(i / 3);
  changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
  CHECK(changed == std::vector<std::size_t>{6, 7});
}

TEST_CASE("MiniGrid 5-step optimum earns 0.955") {
  auto s = minigrid_reset().state;
  double total = 0.0;
  bool done = false;
  for (int a : {2, 2, 1, 2, 2}) {
    REQUIRE_FALSE(done);
    auto t = minigrid_step(s, a);
    s = t.state;
    total += t.reward;
    done = t.done;
  }
  CHECK(done);
  CHECK(std::abs(total - 0.955) < 1e-12);
  CHECK(s.x == 3);
  CHECK(s.y == 3);
  CHECK_THROWS_AS(minigrid_step(s, 0), Error);
}

TEST_CASE("MiniGrid blocked move and actions 3-5") {
  auto s = minigrid_reset().state;
  s = minigrid_step(s, minigrid::TurnLeft).state;
  CHECK(s.dir == 3);
  const auto t = minigrid_step(s, minigrid::Forward);
  CHECK(t.state.x == 1);
  CHECK(t.state.y == 1);
  CHECK(t.reward == 0.0);
  for (int a : {3, 4, 5}) {
    const auto u = minigrid_step(t.state, a);
    CHECK(u.state.step_count == t.state.step_count + 1);
    CHECK(u.state.x == t.state.x);
    CHECK(u.state.dir == t.state.dir);
  }
  CHECK_THROWS_AS(minigrid_step(s, 6), Error);
  CHECK_THROWS_AS(minigrid_step(s, -1), Error);
}

TEST_CASE("MiniGrid timeout and late arrival") {
  auto s = minigrid_reset().state;
  double total = 0.0;
  int steps = 0;
  bool done = false;
  while (!done) {
    auto t = minigrid_step(s, minigrid::Pickup);
    s = t.state;
    total += t.reward;
    done = t.done;
    ++steps;
  }
  CHECK(steps == 100);
  CHECK(total == 0.0);

  // Goal reached on the very last step.
  s = minigrid_reset().state;
  for (int i = 0; i < 95; ++i) s = minigrid_step(s, minigrid::Toggle).state;
  double r = 0.0;
  for (int a : {2, 2, 1, 2, 2}) {
    auto t = minigrid_step(s, a);
    s = t.state;
    r += t.reward;
  }
  CHECK(s.done);
  CHECK(std::abs(r - 0.1) < 1e-12);
}

TEST_CASE("property: MiniGrid is deterministic and rewards are bounded") {
  Rng rng(9);
  std::uniform_int_distribution<int> act(0, 5);
  for (int ep = 0; ep < 200; ++ep) {
    std::vector<int> actions;
    auto s = minigrid_reset().state;
    double total = 0.0;
    while (!s.done) {
      actions.push_back(act(rng));
      auto t = minigrid_step(s, actions.back());
      CHECK(t.state.x >= 1);
      CHECK(t.state.x <= 3);
      CHECK(t.state.y >= 1);
      CHECK(t.state.y <= 3);
      total += t.reward;
      s = t.state;
    }
    CHECK(s.step_count <= 100);
    CHECK((total == 0.0 || (total >= 0.1 - 1e-12 && total <= 0.955 + 1e-12)));
    auto again = minigrid_reset().state;
    double replay = 0.0;
    for (int a : actions) {
      auto t = minigrid_step(again, a);
      replay += t.reward;
      again = t.state;
    }
    CHECK(replay == total);
    if (total > 0.955 - 1e-12) CHECK(actions.size() == 5);
  }
}

TEST_CASE("CartPole reset") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto r = cartpole_reset(seed);
    CHECK(r.obs.size() == 4);
    for (double v : r.obs) CHECK(std::abs(v) <= 0.05);
    CHECK(r.state == cartpole_reset(seed).state);
  }
  CHECK_FALSE(cartpole_reset(1).state == cartpole_reset(2).state);
}

TEST_CASE("CartPole one step from rest") {
  const auto t = cartpole_step(CartPoleState{}, 1);
  CHECK(t.state.x == 0.0);
  CHECK(t.state.theta == 0.0);
  CHECK(t.state.x_dot == doctest::Approx(0.19512).epsilon(1e-4));
  CHECK(t.state.theta_dot == doctest::Approx(-0.29268).epsilon(1e-4));
  CHECK(t.reward == 1.0);
  CHECK_FALSE(t.done);
  CHECK_THROWS_AS(cartpole_step(CartPoleState{}, 2), Error);
}

TEST_CASE("CartPole matches the scalar oracle") {
  Rng rng(10);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  for (int k = 0; k < 1000; ++k) {
    CartPoleState s;
    s.x = 10 * u(rng);
    s.x_dot = 10 * u(rng);
    s.theta = u(rng);
    s.theta_dot = 10 * u(rng);
    const int a = k % 2;
    const auto ref = oracle::cartpole_step({s.x, s.x_dot, s.theta, s.theta_dot}, a);
    const auto t = cartpole_step(s, a);
    CHECK(std::abs(t.state.x - ref[0]) < 1e-12);
    CHECK(std::abs(t.state.x_dot - ref[1]) < 1e-12);
    CHECK(std::abs(t.state.theta - ref[2]) < 1e-12);
    CHECK(std::abs(t.state.theta_dot - ref[3]) < 1e-12);
  }
}

TEST_CASE("CartPole termination rules") {
  CartPoleState s;
  s.theta = 0.21;
  s.theta_dot = 0.5;  // theta becomes 0.22
  auto t = cartpole_step(s, 0);
  CHECK(t.done);
  CHECK(t.reward == 1.0);
  CHECK_THROWS_AS(cartpole_step(t.state, 0), Error);

  CartPoleState edge;
  edge.x = 2.39;
  edge.x_dot = 1.0;
  CHECK(cartpole_step(edge, 1).done);

  CHECK(cartpole_out_of_bounds(CartPoleState{0, 0, 0.2094, 0, 0, false}) == false);
  CHECK(cartpole_out_of_bounds(CartPoleState{0, 0, -0.2096, 0, 0, false}));
}

TEST_CASE("CartPole episode is capped at 500") {
  // A simple angle controller balances indefinitely; the cap ends the episode.
  auto s = cartpole_reset(0).state;
  double total = 0.0;
  int steps = 0;
  bool done = false;
  while (!done) {
    auto t = cartpole_step(s, s.theta + 0.5 * s.theta_dot > 0 ? 1 : 0);
    total += t.reward;
    s = t.state;
    done = t.done;
    ++steps;
  }
  CHECK(steps == 500);
  CHECK(total == 500.0);
}

TEST_CASE("CartPole force-free upright pole stays upright") {
  CartPoleState s;
  for (int i = 0; i < 10000; ++i) s = cartpole_integrate(s, 0.0);
  CHECK(s.theta == 0.0);
  CHECK(s.theta_dot == 0.0);
  CHECK(s.x == 0.0);
}

TEST_CASE("Environment interface and trajectory CSV") {
  auto e = make_environment(EnvKind::MiniGrid);
  CHECK(e->num_actions() == 6);
  CHECK(e->obs_dim() == 75);
  e->reset(0);
  CHECK_FALSE(e->done());
  auto c = make_environment(EnvKind::CartPole);
  CHECK(c->num_actions() == 2);
  CHECK(c->reset(3) == cartpole_reset(3).obs);
  CHECK(parse_env("minigrid5x5") == EnvKind::MiniGrid);
  CHECK(parse_env("cartpole") == EnvKind::CartPole);
  CHECK_THROWS_AS(parse_env("pong"), Error);

  std::ostringstream out;
  write_trajectory_header(out);
  write_trajectory_row(out, 1, 2, 0.955, true);
  CHECK(out.str() == "step,action,reward,done\n1,2,0.955,1\n");
}
