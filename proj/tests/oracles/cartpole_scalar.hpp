#pragma once
// Classic-control cart-pole, written out term by term as a reference.

#include <array>
#include <cmath>

namespace oracle {

// state = {x, x_dot, theta, theta_dot}; action 1 pushes right.
inline std::array<double, 4> cartpole_step(const std::array<double, 4>& s, int action) {
  const double gravity = 9.8, masscart = 1.0, masspole = 0.1, length = 0.5, tau = 0.02;
  const double total_mass = masspole + masscart;
  const double polemass_length = masspole * length;
  const double force = action == 1 ? 10.0 : -10.0;
  const double x = s[0], x_dot = s[1], theta = s[2], theta_dot = s[3];
  const double costheta = std::cos(theta), sintheta = std::sin(theta);
  const double temp = (force + polemass_length * theta_dot * theta_dot * sintheta) / total_mass;
  const double thetaacc = (gravity * sintheta - costheta * temp) /
                          (length * (4.0 / 3.0 - masspole * costheta * costheta / total_mass));
  const double xacc = temp - polemass_length * thetaacc * costheta / total_mass;
  return {x + tau * x_dot, x_dot + tau * xacc, theta + tau * theta_dot, theta_dot + tau * thetaacc};
}

}  // namespace oracle
