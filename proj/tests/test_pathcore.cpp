#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "pathlaw/samplers.hpp"
#include "pathlaw/stattests.hpp"
#include "test_util.hpp"

using namespace pathlaw;

TEST_CASE("make_grid produces the stated nodes") {
  const TimeGrid g = make_grid(1.0, 4);
  const double want[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (int i = 0; i <= 4; ++i) CHECK(g.node(i) == want[i]);
  const Array nodes = g.nodes();
  for (int i = 0; i <= 4; ++i) CHECK(nodes[i] == want[i]);

  const TimeGrid g2 = make_grid(2.0, 2);
  CHECK(g2.node(0) == 0.0);
  CHECK(g2.node(1) == 1.0);
  CHECK(g2.node(2) == 2.0);
}

TEST_CASE("make_grid rejects bad arguments") {
  CHECK_THROWS_AS(make_grid(1.0, 1), ConfigError);
  CHECK_THROWS_AS(make_grid(0.0, 4), ConfigError);
  CHECK_THROWS_AS(make_grid(-1.0, 4), ConfigError);
}

TEST_CASE("sample_bm terminal mean matches the drift") {
  const TimeGrid g = make_grid(1.0, 32);
  const int n = 100000;

  double sum0 = 0.0, sum1 = 0.0;
  for (int k = 0; k < n; ++k) {
    RngStream r0(11, k), r1(12, k);
    sum0 += sample_bm(g, 0.0, r0).values[32];
    sum1 += sample_bm(g, 1.0, r1).values[32];
  }
  const double se = std::sqrt(1.0 / n);  // Var B_1 = t = 1
  CHECK(std::abs(sum0 / n) < 3.0 * se);
  CHECK(std::abs(sum1 / n - 1.0) < 3.0 * se);
}

TEST_CASE("sample_bm starts at zero and is deterministic") {
  const TimeGrid g = make_grid(2.0, 64);
  RngStream a(77, 3), b(77, 3);
  const Path pa = sample_bm(g, 0.5, a), pb = sample_bm(g, 0.5, b);
  CHECK(pa.values[0] == 0.0);
  CHECK((pa.values == pb.values).all());
}

TEST_CASE("driftless covariance matches min(s,u)") {
  const TimeGrid g = make_grid(1.0, 64);
  const int n = 100000;
  // node indices for s-u pairs (0.25, 0.75), (0.5, 0.5), (0.25, 1.0)
  const int pairs[3][2] = {{16, 48}, {32, 32}, {16, 64}};
  double acc[3] = {0, 0, 0};
  for (int k = 0; k < n; ++k) {
    RngStream r(13, k);
    const Path p = sample_bm(g, 0.0, r);
    for (int j = 0; j < 3; ++j)
      acc[j] += p.values[pairs[j][0]] * p.values[pairs[j][1]];
  }
  const double svals[3] = {0.25, 0.5, 0.25};
  const double uvals[3] = {0.75, 0.5, 1.0};
  for (int j = 0; j < 3; ++j) {
    const double want = std::min(svals[j], uvals[j]);
    // Var(B_s B_u) = s u + min(s,u)^2 for zero-mean Gaussians
    const double se = std::sqrt((svals[j] * uvals[j] + want * want) / n);
    CHECK(std::abs(acc[j] / n - want) < 4.0 * se);
  }
}

TEST_CASE("sample_bridge pins the endpoint exactly") {
  const TimeGrid g = make_grid(1.0, 128);
  RngStream r0(21, 0), r3(21, 1);
  CHECK(sample_bridge(g, 0.0, r0).values[128] == 0.0);
  CHECK(sample_bridge(g, 3.0, r3).values[128] == 3.0);
}

TEST_CASE("bridge midpoint variance is s(t-s)/t") {
  const TimeGrid g = make_grid(1.0, 64);
  const int n = 100000;
  std::vector<double> mids(n);
  for (int k = 0; k < n; ++k) {
    RngStream r(22, k);
    mids[k] = sample_bridge(g, 0.0, r).values[32];
  }
  // independent closed form: s(t-s)/t = 0.25 at s = t/2
  CHECK(testutil::var_of(mids) == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("bridge law is endpoint-invariant after removing the ramp") {
  const TimeGrid g = make_grid(1.0, 64);
  const int n = 20000;
  std::vector<double> a(n), b(n);
  for (int k = 0; k < n; ++k) {
    RngStream r0(23, k), r5(24, k);
    a[k] = sample_bridge(g, 0.0, r0).values[32];
    b[k] = sample_bridge(g, 5.0, r5).values[32] - 5.0 * 0.5;
  }
  SamplePool pa = SamplePool::from_values(a), pb = SamplePool::from_values(b);
  const TestReport rep = ks_two_sample(pa, pb);
  CHECK(*rep.p_value >= 0.001);
}

TEST_CASE("gaussian_at_random_time") {
  SUBCASE("a=1 is standard normal") {
    RngStream r(31, 0);
    std::vector<double> xs(100000);
    for (double& x : xs) x = gaussian_at_random_time(1.0, r);
    CHECK(testutil::ks_one_sample_p(xs, testutil::std_normal_cdf) >= 0.001);
  }
  SUBCASE("a=4 has variance 4") {
    RngStream r(31, 1);
    const int n = 100000;
    std::vector<double> xs(n);
    for (double& x : xs) x = gaussian_at_random_time(4.0, r);
    // SE of the sample variance of N(0, 4): 4 sqrt(2/(n-1))
    const double se = 4.0 * std::sqrt(2.0 / (n - 1));
    CHECK(std::abs(testutil::var_of(xs) - 4.0) < 3.0 * se);
  }
  SUBCASE("a=0 is rejected") {
    RngStream r(31, 2);
    CHECK_THROWS_AS(gaussian_at_random_time(0.0, r), DomainError);
  }
}
