#pragma once

#include <cmath>

#include "pathlaw/rng.hpp"
#include "pathlaw/time_grid.hpp"

namespace pathlaw {

// Brownian motion with drift on the grid: values[0] = 0 and independent
// Gaussian increments with mean drift*dt and variance dt.
inline Path sample_bm(const TimeGrid& grid, double drift, RngStream& rng) {
  const int n = grid.n_steps;
  const double dt = grid.dt();
  const double sdt = std::sqrt(dt);
  Array v(n + 1);
  v[0] = 0.0;
  for (int i = 0; i < n; ++i)
    v[i + 1] = v[i] + drift * dt + sdt * rng.next_gaussian();
  return Path{grid, std::move(v)};
}

// Brownian bridge from 0 to endpoint_x over [0, t], built by drift
// correction: b = B - (s/t) B_t + (s/t) x. The endpoint is hit exactly.
inline Path sample_bridge(const TimeGrid& grid, double endpoint_x,
                          RngStream& rng) {
  Path p = sample_bm(grid, 0.0, rng);
  const int n = grid.n_steps;
  const double bt = p.values[n];
  for (int i = 0; i <= n; ++i) {
    const double r = static_cast<double>(i) / n;  // r == 1 exactly at i == n
    p.values[i] += r * (endpoint_x - bt);
  }
  return p;
}

// One draw of an independent Brownian motion evaluated at a deterministic
// random time a > 0, i.e. sqrt(a) * N(0,1). Realizes beta(A_t) conditionally
// on A_t without a second path discretization.
inline double gaussian_at_random_time(double a, RngStream& rng) {
  if (!(a > 0.0))
    throw DomainError("gaussian_at_random_time: time must be positive");
  return std::sqrt(a) * rng.next_gaussian();
}

}  // namespace pathlaw
