#pragma once

#include <Eigen/Core>

#include "pathlaw/errors.hpp"

namespace pathlaw {

using Array = Eigen::ArrayXd;

// Uniform grid 0 = s_0 < s_1 < ... < s_n = t_horizon. Uniformity is load
// bearing: time reversal maps node i to node n-i without interpolation.
struct TimeGrid {
  double t_horizon = 0.0;
  int n_steps = 0;

  TimeGrid() = default;
  TimeGrid(double t, int n) : t_horizon(t), n_steps(n) {
    if (!(t > 0.0)) throw ConfigError("TimeGrid: t_horizon must be positive");
    if (n < 2) throw ConfigError("TimeGrid: n_steps must be at least 2");
  }

  double dt() const { return t_horizon / n_steps; }
  // node(0) == 0 and node(n_steps) == t_horizon exactly.
  double node(int i) const {
    return t_horizon * static_cast<double>(i) / n_steps;
  }
  Array nodes() const {
    return Array::LinSpaced(n_steps + 1, 0.0, t_horizon);
  }
  bool operator==(const TimeGrid&) const = default;
};

inline TimeGrid make_grid(double t_horizon, int n_steps) {
  return TimeGrid(t_horizon, n_steps);
}

// A continuous path sampled at the grid nodes.
struct Path {
  TimeGrid grid;
  Array values;  // n_steps + 1 entries
};

// How the co-propagated exponential functional was obtained.
enum class AProvenance { Quadrature, RulePropagated };

// A path together with its cumulative exponential functional
// A(s_i) = integral of exp(2 phi) up to s_i. Transforms keep A in sync by
// the closed-form propagation rules, which makes the deterministic
// identities of the transform algebra hold to floating-point precision.
struct AugmentedPath {
  Path path;
  Array a_values;  // a_values[0] == 0, strictly increasing
  AProvenance a_provenance = AProvenance::Quadrature;

  int n() const { return path.grid.n_steps; }
  double t() const { return path.grid.t_horizon; }
  double phi_end() const { return path.values[path.grid.n_steps]; }
  double a_end() const { return a_values[path.grid.n_steps]; }
};

}  // namespace pathlaw
