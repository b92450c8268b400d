#pragma once

#include <cmath>
#include <string>

#include "pathlaw/time_grid.hpp"

namespace pathlaw {

// Quadrature rule for A(s) = integral of exp(2 phi) ds.
//
// PiecewiseLinearExact integrates exp(2 phi) exactly under the assumption
// that phi is linear on each step: the segment contribution is
// dt * (e^{2 phi_{i+1}} - e^{2 phi_i}) / (2 (phi_{i+1} - phi_i)), with the
// limit dt * e^{2 phi_i} when |phi_{i+1} - phi_i| < 1e-12.
enum class QuadRule { LeftRiemann, Trapezoid, PiecewiseLinearExact };

// exp(2*350) is still finite in double precision; beyond that we refuse.
inline constexpr double kPhiOverflowGuard = 350.0;

inline AugmentedPath exp_quad_A(const Path& path, QuadRule rule) {
  const int n = path.grid.n_steps;
  if (path.values.size() != n + 1)
    throw ConfigError("exp_quad_A: values length does not match grid");
  if (!path.values.allFinite())
    throw ConfigError("exp_quad_A: path has non-finite values");
  for (int i = 0; i <= n; ++i)
    if (path.values[i] > kPhiOverflowGuard)
      throw OverflowError("exp_quad_A: exp(2*phi) overflows at node " +
                          std::to_string(i));

  const double dt = path.grid.dt();
  const Array g = (2.0 * path.values).exp();
  Array a(n + 1);
  a[0] = 0.0;
  switch (rule) {
    case QuadRule::LeftRiemann:
      for (int i = 0; i < n; ++i) a[i + 1] = a[i] + dt * g[i];
      break;
    case QuadRule::Trapezoid:
      for (int i = 0; i < n; ++i)
        a[i + 1] = a[i] + 0.5 * dt * (g[i] + g[i + 1]);
      break;
    case QuadRule::PiecewiseLinearExact:
      for (int i = 0; i < n; ++i) {
        const double dphi = path.values[i + 1] - path.values[i];
        const double inc = std::abs(dphi) < 1e-12
                               ? dt * g[i]
                               : dt * (g[i + 1] - g[i]) / (2.0 * dphi);
        a[i + 1] = a[i] + inc;
      }
      break;
  }
  return AugmentedPath{path, std::move(a), AProvenance::Quadrature};
}

// Z(s_i) = exp(-phi(s_i)) * A(s_i); Z(0) = 0.
inline Array z_of(const AugmentedPath& aug) {
  return (-aug.path.values).exp() * aug.a_values;
}

// Maximum relative defect of the differential relation
// d/ds (1/A_s) = -1/Z_s^2 over interior nodes, measured as
// |finite-difference + 1/Z^2| * Z^2.
//
// Reciprocals of A are only well conditioned away from s = 0 (A_0 = 0), so
// the maximum is taken over nodes with s_i >= 0.2 t, mirroring where 1/A
// is consumed elsewhere; central differences are used except at i = 1,
// whose left neighbour would be 1/A_0, where the forward difference is
// taken instead.
inline double deriv_residual(const AugmentedPath& aug) {
  const int n = aug.n();
  const double dt = aug.path.grid.dt();
  const Array z = z_of(aug);
  const int lo = std::max(1, static_cast<int>(std::ceil(0.2 * n - 1e-9)));
  double worst = 0.0;
  for (int i = lo; i <= n - 1; ++i) {
    const double d =
        i >= 2 ? (1.0 / aug.a_values[i + 1] - 1.0 / aug.a_values[i - 1]) /
                     (2.0 * dt)
               : (1.0 / aug.a_values[i + 1] - 1.0 / aug.a_values[i]) / dt;
    const double z2 = z[i] * z[i];
    worst = std::max(worst, std::abs(d * z2 + 1.0));
  }
  return worst;
}

}  // namespace pathlaw
