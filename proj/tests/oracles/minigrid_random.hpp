#pragma once
// Exact return statistics of the uniform-random policy on Empty 5x5, by
// forward propagation of the state distribution over (x, y, dir).

#include <array>
#include <cmath>

namespace oracle {

struct ReturnMoments {
  double mean = 0.0;
  double second = 0.0;
  double stddev() const { return std::sqrt(second - mean * mean); }
};

inline ReturnMoments minigrid_random_policy() {
  // p[x][y][dir] over interior cells 1..3; walls elsewhere.
  double p[5][5][4] = {};
  p[1][1][0] = 1.0;
  const int dx[4] = {1, 0, -1, 0}, dy[4] = {0, 1, 0, -1};
  ReturnMoments m;
  for (int t = 1; t <= 100; ++t) {
    double q[5][5][4] = {};
    double hit = 0.0;
    for (int x = 1; x <= 3; ++x)
      for (int y = 1; y <= 3; ++y)
        for (int d = 0; d < 4; ++d) {
          const double w = p[x][y][d] / 6.0;
          if (w == 0.0) continue;
          q[x][y][(d + 3) % 4] += w;
          q[x][y][(d + 1) % 4] += w;
          q[x][y][d] += 3.0 * w;  // pickup, drop, toggle
          const int nx = x + dx[d], ny = y + dy[d];
          if (nx < 1 || nx > 3 || ny < 1 || ny > 3) {
            q[x][y][d] += w;
          } else if (nx == 3 && ny == 3) {
            hit += w;
          } else {
            q[nx][ny][d] += w;
          }
        }
    const double r = 1.0 - 0.9 * t / 100.0;
    m.mean += hit * r;
    m.second += hit * r * r;
    for (int x = 0; x < 5; ++x)
      for (int y = 0; y < 5; ++y)
        for (int d = 0; d < 4; ++d) p[x][y][d] = q[x][y][d];
  }
  return m;
}

}  // namespace oracle
