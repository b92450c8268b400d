#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pathlaw/samplers.hpp"
#include "pathlaw/transforms.hpp"

using namespace pathlaw;

namespace {

AugmentedPath sampled_aug(double t, int n, std::uint64_t seed,
                          std::uint64_t stream, double drift = 0.0) {
  RngStream rng(seed, stream);
  return exp_quad_A(sample_bm(make_grid(t, n), drift, rng),
                    QuadRule::Trapezoid);
}

AugmentedPath ramp_aug(double t, int n) {
  const TimeGrid g = make_grid(t, n);
  Path p{g, g.nodes()};
  return exp_quad_A(p, QuadRule::PiecewiseLinearExact);
}

AugmentedPath zero_aug(double t, int n) {
  const TimeGrid g = make_grid(t, n);
  Path p{g, Array::Zero(n + 1)};
  return exp_quad_A(p, QuadRule::PiecewiseLinearExact);
}

}  // namespace

TEST_CASE("t_z at z = 0 is the identity, bit for bit") {
  const AugmentedPath aug = sampled_aug(1.0, 128, 41, 0);
  const AugmentedPath out = t_z(aug, 0.0);
  CHECK((out.path.values == aug.path.values).all());
  CHECK((out.a_values == aug.a_values).all());
  CHECK(out.a_provenance == AProvenance::RulePropagated);
}

TEST_CASE("t_z on the zero path matches the closed form") {
  const AugmentedPath aug = zero_aug(1.0, 256);
  const double z = 1.3;
  const AugmentedPath out = t_z(aug, z);
  for (int i = 0; i <= 256; ++i) {
    const double s = aug.path.grid.node(i);
    const double want = -std::log(1.0 + s * std::expm1(z));
    CHECK(out.path.values[i] == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("t_z endpoint shift is exact to 1e-12") {
  const AugmentedPath aug = sampled_aug(1.0, 512, 42, 1);
  const AugmentedPath out = t_z(aug, 0.7);
  CHECK(std::abs(out.phi_end() - (aug.phi_end() - 0.7)) <= 1e-12);
  CHECK(out.a_end() ==
        doctest::Approx(std::exp(-0.7) * aug.a_end()).epsilon(1e-12));
}

TEST_CASE("involution") {
  SUBCASE("flat endpoint makes it the identity") {
    // bridge to 0 has phi_t = 0 exactly, so z = 2 phi_t = 0
    RngStream rng(43, 0);
    const AugmentedPath aug = exp_quad_A(
        sample_bridge(make_grid(1.0, 128), 0.0, rng), QuadRule::Trapezoid);
    const AugmentedPath out = t_tilde(aug);
    CHECK((out.path.values == aug.path.values).all());
  }
  SUBCASE("applying it twice restores the input within 1e-9") {
    const AugmentedPath aug = sampled_aug(1.0, 512, 43, 1);
    CHECK(aug_residual(t_tilde(t_tilde(aug)), aug) <= 1e-9);
  }
  SUBCASE("ramp endpoint flips sign to 1e-12") {
    const AugmentedPath out = t_tilde(ramp_aug(1.0, 256));
    CHECK(std::abs(out.phi_end() + 1.0) <= 1e-12);
  }
}

TEST_CASE("t_alpha") {
  SUBCASE("alpha = 0 is the identity, bit for bit") {
    const AugmentedPath aug = sampled_aug(1.0, 128, 44, 0);
    const AugmentedPath out = t_alpha(aug, 0.0);
    CHECK((out.path.values == aug.path.values).all());
    CHECK((out.a_values == aug.a_values).all());
  }
  SUBCASE("zero path gives -log(1+s)") {
    const AugmentedPath aug = zero_aug(1.0, 256);
    const AugmentedPath out = t_alpha(aug, 1.0);
    for (int i = 0; i <= 256; ++i) {
      const double s = aug.path.grid.node(i);
      CHECK(out.path.values[i] ==
            doctest::Approx(-std::log1p(s)).epsilon(1e-13));
    }
  }
  SUBCASE("direct formula agrees with the t_z route to 1e-12") {
    const AugmentedPath aug = sampled_aug(1.0, 512, 44, 1);
    const AugmentedPath direct = t_alpha(aug, 0.5);
    const AugmentedPath via_tz =
        t_z(aug, std::log1p(0.5 * aug.a_end()));
    CHECK(aug_residual(direct, via_tz) <= 1e-12);
  }
  SUBCASE("negative alpha is rejected") {
    const AugmentedPath aug = sampled_aug(1.0, 64, 44, 2);
    CHECK_THROWS_AS(t_alpha(aug, -0.1), DomainError);
  }
}

TEST_CASE("reverse") {
  SUBCASE("zero path is a fixed point") {
    const AugmentedPath aug = zero_aug(1.0, 256);
    const AugmentedPath out = reverse(aug);
    CHECK((out.path.values == aug.path.values).all());
    for (int i = 0; i <= 256; ++i)
      CHECK(out.a_values[i] ==
            doctest::Approx(aug.a_values[i]).epsilon(1e-14));
  }
  SUBCASE("ramp reverses to -s with the shifted clock") {
    const int n = 256;
    const AugmentedPath aug = ramp_aug(1.0, n);
    const AugmentedPath out = reverse(aug);
    const double w = std::exp(-2.0);
    for (int i = 0; i <= n; ++i) {
      CHECK(out.path.values[i] ==
            doctest::Approx(-aug.path.grid.node(i)).epsilon(1e-13));
      CHECK(out.a_values[i] ==
            doctest::Approx(w * (aug.a_end() - aug.a_values[n - i]))
                .epsilon(1e-14));
    }
  }
  SUBCASE("double reversal restores phi - phi_0") {
    const AugmentedPath aug = sampled_aug(1.0, 512, 45, 0);
    const AugmentedPath out = reverse(reverse(aug));
    for (int i = 0; i <= 512; ++i)
      CHECK(out.path.values[i] ==
            doctest::Approx(aug.path.values[i]).epsilon(1e-13));
  }
}

TEST_CASE("compose_durations") {
  SUBCASE("u = 0 collapses to the restriction") {
    const AugmentedPath aug = sampled_aug(1.0, 256, 46, 0);
    const AugmentedPath out = compose_durations(aug, 1.0);
    CHECK(aug_residual(out, aug) <= 1e-9);
  }
  SUBCASE("deterministic ramp split in the middle") {
    const AugmentedPath aug = ramp_aug(1.0, 512);
    LawParams p;
    p.t_split = 0.5;
    CHECK(law_residual(LawId::DurationComposition, aug, p) <= 1e-9);
  }
  SUBCASE("sampled path at n = 1024") {
    const AugmentedPath aug = sampled_aug(1.5, 1536, 46, 1);
    LawParams p;
    p.t_split = 1.0;
    CHECK(law_residual(LawId::DurationComposition, aug, p) <= 1e-9);
  }
  SUBCASE("off-node split time is rejected") {
    const AugmentedPath aug = sampled_aug(1.0, 256, 46, 2);
    CHECK_THROWS_AS(compose_durations(aug, 0.333), DomainError);
  }
}

TEST_CASE("law_residual closed-form cases") {
  SUBCASE("Z invariance on the zero path is exact to 1e-12") {
    LawParams p;
    p.z = 2.0;
    CHECK(law_residual(LawId::ZInvariance, zero_aug(1.0, 256), p) <= 1e-12);
  }
  SUBCASE("semigroup on a sampled path") {
    LawParams p;
    p.z = 0.3;
    p.z2 = -1.1;
    CHECK(law_residual(LawId::Semigroup, sampled_aug(1.0, 512, 47, 0), p) <=
          1e-9);
  }
  SUBCASE("pcac guards throw outside their domain") {
    const AugmentedPath aug = sampled_aug(1.0, 128, 47, 1);
    LawParams p;
    p.x = 2.0 * std::exp(2.0 * aug.phi_end()) / (2.0 * aug.a_end());
    CHECK_THROWS_WITH_AS(law_residual(LawId::Pcac1, aug, p),
                         doctest::Contains("pcac1 guard"), DomainError);
    p.x = 2.0 / (2.0 * aug.a_end());
    CHECK_THROWS_WITH_AS(law_residual(LawId::Pcac2, aug, p),
                         doctest::Contains("pcac2 guard"), DomainError);
  }
}

TEST_CASE("every law holds on sampled paths with random parameters") {
  const double t = 1.0;
  const int n = 256, n_long = 384;
  for (int k = 0; k < 10; ++k) {
    RngStream rng(48, k);
    RngStream params(49, k);
    const AugmentedPath aug_long = exp_quad_A(
        sample_bm(make_grid(1.5, n_long), 0.0, rng), QuadRule::Trapezoid);
    const AugmentedPath aug = restrict_prefix(aug_long, n);
    for (int draw = 0; draw < 5; ++draw) {
      LawParams p;
      p.z = 4.0 * params.next_uniform() - 2.0;
      p.z2 = 4.0 * params.next_uniform() - 2.0;
      p.alpha = 2.0 * params.next_uniform();
      p.t_split = t;
      const double u1 = params.next_uniform(), u2 = params.next_uniform();
      for (LawId law : kAllLaws) {
        LawParams q = p;
        if (law == LawId::Pcac1)
          q.x = 0.9 * u1 * std::exp(2.0 * aug.phi_end()) / (2.0 * aug.a_end());
        if (law == LawId::Pcac2) q.x = 0.9 * u2 / (2.0 * aug.a_end());
        const AugmentedPath& input =
            law == LawId::DurationComposition ? aug_long : aug;
        REQUIRE(law_residual(law, input, q) <= 1e-9);
      }
    }
  }
}

TEST_CASE("endpoint laws hold to 1e-12 for a spread of shifts") {
  for (int k = 0; k < 20; ++k) {
    const AugmentedPath aug = sampled_aug(1.0, 256, 50, k);
    LawParams p;
    p.z = -3.0 + 0.3 * k;
    CHECK(law_residual(LawId::Endpoint, aug, p) <= 1e-12);
    CHECK(law_residual(LawId::TildeEndpoint, aug, p) <= 1e-12);
  }
}

TEST_CASE("rule-propagated A stays consistent with re-quadrature") {
  // one-point sanity; the grid-refinement study lives in the acceptance run
  const AugmentedPath aug = sampled_aug(1.0, 512, 51, 0);
  const AugmentedPath tr = t_tilde(aug);
  const AugmentedPath requad = exp_quad_A(tr.path, QuadRule::Trapezoid);
  const double rel =
      std::abs(requad.a_end() - tr.a_end()) / tr.a_end();
  CHECK(rel < 5e-2);
}
