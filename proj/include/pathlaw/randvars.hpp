#pragma once

#include <cmath>

#include "pathlaw/errors.hpp"
#include "pathlaw/rng.hpp"

namespace pathlaw {

// Gamma shape parameter; the rate is fixed to 1.
struct GammaParam {
  double mu;
};

// Exact-in-law gamma draw with density x^{mu-1} e^{-x} / Gamma(mu).
// Marsaglia-Tsang squeeze-rejection for mu >= 1; shapes below 1 use the
// boost gamma(mu) = gamma(mu+1) * U^{1/mu}.
inline double gamma_sample(const GammaParam& p, RngStream& rng) {
  if (!(p.mu > 0.0)) throw DomainError("gamma_sample: shape must be positive");
  double mu = p.mu;
  double boost = 1.0;
  if (mu < 1.0) {
    boost = std::pow(rng.next_uniform(), 1.0 / mu);
    mu += 1.0;
  }
  const double d = mu - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double xn, v;
    do {
      xn = rng.next_gaussian();
      v = 1.0 + c * xn;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_uniform();
    const double x2 = xn * xn;
    if (u < 1.0 - 0.0331 * x2 * x2) return boost * d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
      return boost * d * v;
  }
}

// The limiting exponential functional of a negatively drifted path equals
// 1/(2 gamma_mu) in law; sampled exactly through the gamma draw.
inline double dufresne_limit_sample(const GammaParam& p, RngStream& rng) {
  return 1.0 / (2.0 * gamma_sample(p, rng));
}

// First passage of unit-volatility Brownian motion with drift nu > 0 to the
// level a > 0: inverse-Gaussian with mean a/nu and shape a^2, sampled
// exactly by the Michael-Schucany-Haas transformation.
inline double hitting_time_sample(double level_a, double drift_nu,
                                  RngStream& rng) {
  if (!(level_a > 0.0))
    throw DomainError("hitting_time_sample: level must be positive");
  if (!(drift_nu > 0.0))
    throw DomainError("hitting_time_sample: drift must be positive");
  const double mean = level_a / drift_nu;
  const double shape = level_a * level_a;
  const double g = rng.next_gaussian();
  const double y = g * g;
  const double x =
      mean + mean * mean * y / (2.0 * shape) -
      (mean / (2.0 * shape)) *
          std::sqrt(4.0 * mean * shape * y + mean * mean * y * y);
  return rng.next_uniform() <= mean / (mean + x) ? x : mean * mean / x;
}

}  // namespace pathlaw
