#pragma once

#include <cmath>
#include <string>

#include "pathlaw/functionals.hpp"
#include "pathlaw/time_grid.hpp"

namespace pathlaw {

// ---------------------------------------------------------------------------
// Transform family
//
// t_z subtracts log{1 + (A_s/A_t)(e^z - 1)} from the path and propagates the
// exponential functional by the closed-form rule
//     1/A'_s = 1/A_s + (e^z - 1)/A_t,
// evaluated in the division-free form A'_s = A_s / (1 + (e^z-1) A_s / A_t)
// so that A'_0 = 0 stays exact and z = 0 is the identity bit-for-bit.
// Propagating A this way (instead of re-quadrature) makes the whole algebra
// of deterministic identities exact on the discrete representation;
// quadrature recomputation is a consistency check, not the semantics.
// ---------------------------------------------------------------------------

inline AugmentedPath t_z(const AugmentedPath& aug, double z) {
  if (!(std::abs(z) <= 700.0))
    throw OverflowError("t_z: |z| too large, exp(z) leaves double range");
  const double scale = std::expm1(z) / aug.a_end();
  const Array scaled = aug.a_values * scale;
  Array phi = aug.path.values - scaled.log1p();
  Array a = aug.a_values / (1.0 + scaled);
  return AugmentedPath{Path{aug.path.grid, std::move(phi)}, std::move(a),
                       AProvenance::RulePropagated};
}

// The involution: t_z with z = 2 phi_t. Endpoint maps to -phi_t and
// applying it twice restores the input.
inline AugmentedPath t_tilde(const AugmentedPath& aug) {
  return t_z(aug, 2.0 * aug.phi_end());
}

// Non-anticipative family: subtracts log(1 + alpha A_s). Equals t_z with
// z = log(1 + alpha A_t); both the path and A use the direct form, which
// coincides with the t_z propagation rule since e^z - 1 = alpha A_t.
inline AugmentedPath t_alpha(const AugmentedPath& aug, double alpha) {
  if (!(alpha >= 0.0))
    throw DomainError("t_alpha: alpha must be nonnegative");
  const Array scaled = aug.a_values * alpha;
  Array phi = aug.path.values - scaled.log1p();
  Array a = aug.a_values / (1.0 + scaled);
  return AugmentedPath{Path{aug.path.grid, std::move(phi)}, std::move(a),
                       AProvenance::RulePropagated};
}

// Time reversal R(phi)(s) = phi(t-s) - phi(t), with
// A'_s = e^{-2 phi_t} (A_t - A_{t-s}). Requires the uniform grid so that
// t - s_i is again a node; no interpolation ever happens here.
inline AugmentedPath reverse(const AugmentedPath& aug) {
  const int n = aug.n();
  const double phit = aug.phi_end();
  if (!(std::abs(phit) <= kPhiOverflowGuard))
    throw OverflowError("reverse: exp(-2 phi_t) leaves double range");
  const double w = std::exp(-2.0 * phit);
  const double at = aug.a_end();
  Array phi(n + 1), a(n + 1);
  for (int i = 0; i <= n; ++i) {
    phi[i] = aug.path.values[n - i] - phit;
    a[i] = w * (at - aug.a_values[n - i]);
  }
  return AugmentedPath{Path{aug.path.grid, std::move(phi)}, std::move(a),
                       AProvenance::RulePropagated};
}

// Prefix restriction to [0, s_k]; A restricts to its prefix because A(s)
// only looks backwards.
inline AugmentedPath restrict_prefix(const AugmentedPath& aug, int k) {
  const int n = aug.n();
  if (k < 2 || k > n)
    throw DomainError("restrict_prefix: node index out of range");
  TimeGrid grid(aug.path.grid.node(k), k);
  return AugmentedPath{Path{grid, aug.path.values.head(k + 1)},
                       aug.a_values.head(k + 1), aug.a_provenance};
}

// Resolve a time to a grid node index, rejecting off-node times.
inline int node_index_of(const TimeGrid& grid, double t) {
  const double pos = t / grid.dt();
  const int k = static_cast<int>(std::llround(pos));
  if (k < 0 || k > grid.n_steps ||
      std::abs(pos - k) > 1e-9 * std::max(1.0, pos))
    throw DomainError("time " + std::to_string(t) + " is not a grid node");
  return k;
}

// Composition of involutions of different durations: applies the
// duration-(t+u) involution, restricts to [0, t], and applies the
// duration-t involution. Equals t_z on the restricted input with
// z = phi_t + (involution of the long path at t); see law_residual.
inline AugmentedPath compose_durations(const AugmentedPath& aug_long,
                                       double t) {
  const int k = node_index_of(aug_long.path.grid, t);
  return t_tilde(restrict_prefix(t_tilde(aug_long), k));
}

// ---------------------------------------------------------------------------
// Residual validators, one per deterministic law of the algebra.
// ---------------------------------------------------------------------------

enum class LawId {
  Endpoint,
  InverseA,
  ZInvariance,
  Semigroup,
  RConjugation,
  TildeEndpoint,
  TildeInverseA,
  TildeZInvariance,
  TildeInvolution,
  TildeFourFold,
  ComptRelation,
  RCommute,
  DurationComposition,
  LexprCt,
  LexprTa,
  Pcac1,
  Pcac2,
};

inline constexpr LawId kAllLaws[] = {
    LawId::Endpoint,        LawId::InverseA,     LawId::ZInvariance,
    LawId::Semigroup,       LawId::RConjugation, LawId::TildeEndpoint,
    LawId::TildeInverseA,   LawId::TildeZInvariance,
    LawId::TildeInvolution, LawId::TildeFourFold, LawId::ComptRelation,
    LawId::RCommute,        LawId::DurationComposition,
    LawId::LexprCt,         LawId::LexprTa,      LawId::Pcac1,
    LawId::Pcac2,
};

inline const char* to_string(LawId law) {
  switch (law) {
    case LawId::Endpoint: return "Endpoint";
    case LawId::InverseA: return "InverseA";
    case LawId::ZInvariance: return "ZInvariance";
    case LawId::Semigroup: return "Semigroup";
    case LawId::RConjugation: return "RConjugation";
    case LawId::TildeEndpoint: return "TildeEndpoint";
    case LawId::TildeInverseA: return "TildeInverseA";
    case LawId::TildeZInvariance: return "TildeZInvariance";
    case LawId::TildeInvolution: return "TildeInvolution";
    case LawId::TildeFourFold: return "TildeFourFold";
    case LawId::ComptRelation: return "ComptRelation";
    case LawId::RCommute: return "RCommute";
    case LawId::DurationComposition: return "DurationComposition";
    case LawId::LexprCt: return "LexprCt";
    case LawId::LexprTa: return "LexprTa";
    case LawId::Pcac1: return "Pcac1";
    case LawId::Pcac2: return "Pcac2";
  }
  return "?";
}

// Parameters consumed by the validators; each law reads what it needs.
struct LawParams {
  double z = 0.3;
  double z2 = -1.1;
  double alpha = 0.5;
  double x = 0.1;
  double t_split = 0.0;  // DurationComposition split time (grid node)
};

// Max absolute difference on path values plus max relative difference on
// A over nodes i >= 1 (A spans orders of magnitude; index 0 is 0 = 0).
inline double aug_residual(const AugmentedPath& lhs, const AugmentedPath& rhs) {
  double worst_a = 0.0;
  for (int i = 1; i <= lhs.n(); ++i)
    worst_a = std::max(
        worst_a, std::abs(lhs.a_values[i] - rhs.a_values[i]) /
                     std::abs(rhs.a_values[i]));
  return (lhs.path.values - rhs.path.values).abs().maxCoeff() + worst_a;
}

inline double rel_tail_residual(const Array& lhs, const Array& rhs) {
  double worst = 0.0;
  for (int i = 1; i < lhs.size(); ++i)
    worst = std::max(worst, std::abs(lhs[i] - rhs[i]) / std::abs(rhs[i]));
  return worst;
}

// Residual of one named identity, computed entirely with rule-propagated A.
inline double law_residual(LawId law, const AugmentedPath& aug,
                           const LawParams& p) {
  switch (law) {
    case LawId::Endpoint: {
      return std::abs(t_z(aug, p.z).phi_end() - (aug.phi_end() - p.z));
    }
    case LawId::InverseA: {
      const AugmentedPath out = t_z(aug, p.z);
      const double c = std::expm1(p.z) / aug.a_end();
      Array lhs = 1.0 / out.a_values, rhs = 1.0 / aug.a_values + c;
      return rel_tail_residual(lhs, rhs);
    }
    case LawId::ZInvariance: {
      return rel_tail_residual(z_of(t_z(aug, p.z)), z_of(aug));
    }
    case LawId::Semigroup: {
      return aug_residual(t_z(t_z(aug, p.z2), p.z), t_z(aug, p.z + p.z2));
    }
    case LawId::RConjugation: {
      return aug_residual(t_z(reverse(t_z(aug, p.z)), p.z), reverse(aug));
    }
    case LawId::TildeEndpoint: {
      return std::abs(t_tilde(aug).phi_end() + aug.phi_end());
    }
    case LawId::TildeInverseA: {
      const AugmentedPath out = t_tilde(aug);
      const double c = std::expm1(2.0 * aug.phi_end()) / aug.a_end();
      Array lhs = 1.0 / out.a_values, rhs = 1.0 / aug.a_values + c;
      return rel_tail_residual(lhs, rhs);
    }
    case LawId::TildeZInvariance: {
      return rel_tail_residual(z_of(t_tilde(aug)), z_of(aug));
    }
    case LawId::TildeInvolution: {
      return aug_residual(t_tilde(t_tilde(aug)), aug);
    }
    case LawId::TildeFourFold: {
      return aug_residual(
          t_tilde(t_z(t_tilde(t_z(aug, p.z)), p.z)), aug);
    }
    case LawId::ComptRelation: {
      return aug_residual(t_tilde(t_z(aug, p.z)),
                          t_z(aug, 2.0 * aug.phi_end() - p.z));
    }
    case LawId::RCommute: {
      if (aug.path.values[0] != 0.0)
        throw DomainError("law_residual: RCommute requires phi_0 = 0");
      return aug_residual(reverse(t_tilde(aug)), t_tilde(reverse(aug)));
    }
    case LawId::DurationComposition: {
      const int k = node_index_of(aug.path.grid, p.t_split);
      const AugmentedPath lhs = compose_durations(aug, p.t_split);
      const double z_star =
          aug.path.values[k] + t_tilde(aug).path.values[k];
      return aug_residual(lhs, t_z(restrict_prefix(aug, k), z_star));
    }
    case LawId::LexprCt: {
      // involution after the non-anticipative map collapses to a single t_z
      const double z =
          2.0 * aug.phi_end() - std::log1p(p.alpha * aug.a_end());
      return aug_residual(t_tilde(t_alpha(aug, p.alpha)), t_z(aug, z));
    }
    case LawId::LexprTa: {
      // non-anticipative map after the involution, likewise
      const double pt = aug.phi_end();
      const double z =
          2.0 * pt + std::log1p(p.alpha * aug.a_end() * std::exp(-2.0 * pt));
      return aug_residual(t_alpha(t_tilde(aug), p.alpha), t_z(aug, z));
    }
    case LawId::Pcac1: {
      const double g =
          std::exp(2.0 * aug.phi_end()) - 2.0 * p.x * aug.a_end();
      if (!(g > 0.0))
        throw DomainError(
            "law_residual: pcac1 guard exp(2 phi_t) - 2 x A_t > 0 violated");
      const AugmentedPath mid = t_z(aug, std::log(g));
      const double z2 =
          2.0 * mid.phi_end() - std::log1p(2.0 * p.x * mid.a_end());
      return aug_residual(t_z(mid, z2), aug);
    }
    case LawId::Pcac2: {
      const double h = 1.0 - 2.0 * p.x * aug.a_end();
      if (!(h > 0.0))
        throw DomainError(
            "law_residual: pcac2 guard 1 - 2 x A_t > 0 violated");
      const AugmentedPath mid = t_z(aug, 2.0 * aug.phi_end() - std::log(h));
      const double pt = mid.phi_end();
      const double z2 =
          2.0 * pt + std::log1p(2.0 * p.x * mid.a_end() * std::exp(-2.0 * pt));
      return aug_residual(t_z(mid, z2), aug);
    }
  }
  throw ConfigError("law_residual: unknown law");
}

}  // namespace pathlaw
