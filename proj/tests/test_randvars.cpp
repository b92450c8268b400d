#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pathlaw/randvars.hpp"
#include "pathlaw/stattests.hpp"
#include "test_util.hpp"

using namespace pathlaw;

TEST_CASE("gamma_sample") {
  SUBCASE("shape 1 is exponential") {
    RngStream r(61, 0);
    std::vector<double> xs(100000);
    for (double& x : xs) x = gamma_sample({1.0}, r);
    const double p = testutil::ks_one_sample_p(
        xs, [](double x) { return -std::expm1(-x); });
    CHECK(p >= 0.001);
  }
  SUBCASE("mean equals the shape") {
    RngStream r(61, 1);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += gamma_sample({2.5}, r);
    // Var gamma(2.5) = 2.5
    CHECK(std::abs(sum / n - 2.5) < 3.0 * std::sqrt(2.5 / n));
  }
  SUBCASE("integer shape matches a sum of exponentials") {
    RngStream ra(61, 2), rb(61, 3);
    const int n = 100000;
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = gamma_sample({3.0}, ra);
      b[i] = -std::log(rb.next_uniform()) - std::log(rb.next_uniform()) -
             std::log(rb.next_uniform());
    }
    SamplePool pa = SamplePool::from_values(a);
    SamplePool pb = SamplePool::from_values(b);
    CHECK(*ks_two_sample(pa, pb).p_value >= 0.001);
  }
  SUBCASE("small shapes stay exact in law") {
    RngStream r(61, 4);
    std::vector<double> xs(100000);
    for (double& x : xs) x = gamma_sample({0.5}, r);
    // gamma(1/2) is chi^2_1 / 2, with CDF erf(sqrt(x))
    const double p = testutil::ks_one_sample_p(
        xs, [](double x) { return std::erf(std::sqrt(x)); });
    CHECK(p >= 0.001);
  }
  SUBCASE("nonpositive shape is rejected") {
    RngStream r(61, 5);
    CHECK_THROWS_AS(gamma_sample({0.0}, r), DomainError);
    CHECK_THROWS_AS(gamma_sample({-1.0}, r), DomainError);
  }
}

TEST_CASE("dufresne_limit_sample") {
  SUBCASE("median of the shape-1 case is 1/(2 log 2)") {
    RngStream r(62, 0);
    const int n = 100000;
    std::vector<double> xs(n);
    for (double& x : xs) x = dufresne_limit_sample({1.0}, r);
    std::nth_element(xs.begin(), xs.begin() + n / 2, xs.end());
    // SE of the sample median: 1/(2 f(m) sqrt(n)) with f(0.7213) = 0.4805
    CHECK(std::abs(xs[n / 2] - 1.0 / (2.0 * std::log(2.0))) < 0.0132);
  }
  SUBCASE("mean for shape 3 is 1/4") {
    RngStream r(62, 1);
    const int n = 100000;
    std::vector<double> xs(n);
    for (double& x : xs) x = dufresne_limit_sample({3.0}, r);
    const double se = std::sqrt(testutil::var_of(xs) / n);
    CHECK(std::abs(testutil::mean_of(xs) - 0.25) < 3.0 * se);
  }
  SUBCASE("fixed stream reproduces the draws") {
    RngStream a(62, 2), b(62, 2);
    for (int i = 0; i < 100; ++i)
      REQUIRE(dufresne_limit_sample({1.5}, a) ==
              dufresne_limit_sample({1.5}, b));
  }
}

namespace {

// Brute-force first-passage oracle: Euler walk until the level is crossed.
double euler_first_passage(double a, double nu, double dt, RngStream& rng) {
  const double sdt = std::sqrt(dt);
  double x = 0.0;
  long steps = 0;
  while (x < a) {
    x += nu * dt + sdt * rng.next_gaussian();
    ++steps;
  }
  return static_cast<double>(steps) * dt;
}

}  // namespace

TEST_CASE("hitting_time_sample") {
  SUBCASE("unit level and drift has mean 1") {
    RngStream r(63, 0);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += hitting_time_sample(1.0, 1.0, r);
    // inverse-Gaussian variance mean^3/shape = 1
    CHECK(std::abs(sum / n - 1.0) < 3.0 * std::sqrt(1.0 / n));
  }
  SUBCASE("a=2, nu=0.5: mean 4 and variance 16") {
    // Euler first-passage oracle at step 1e-5 (1e4 paths, run offline):
    // mean 3.9823 (se 0.039), variance 15.56, confirming 4 and 16 here.
    RngStream r(63, 1);
    const int n = 10000;
    std::vector<double> xs(n);
    for (double& x : xs) x = hitting_time_sample(2.0, 0.5, r);
    const double mean = testutil::mean_of(xs);
    const double var = testutil::var_of(xs);
    CHECK(std::abs(mean - 4.0) < 3.0 * std::sqrt(var / n));
    // SE of the sample variance from the fourth moment
    double m4 = 0.0;
    for (double x : xs) m4 += std::pow(x - mean, 4);
    m4 /= n;
    const double se_var = std::sqrt((m4 - var * var) / n);
    CHECK(std::abs(var - 16.0) < 4.0 * se_var);
  }
  SUBCASE("matches the Euler first-passage oracle in law") {
    RngStream exact_rng(63, 2), euler_rng(63, 3);
    const int n = 10000;
    std::vector<double> exact(n), euler(n);
    for (int i = 0; i < n; ++i) {
      exact[i] = hitting_time_sample(1.0, 1.0, exact_rng);
      euler[i] = euler_first_passage(1.0, 1.0, 1e-4, euler_rng);
    }
    SamplePool pa = SamplePool::from_values(exact);
    SamplePool pb = SamplePool::from_values(euler);
    CHECK(*ks_two_sample(pa, pb).p_value >= 0.001);
  }
  SUBCASE("nonpositive arguments are rejected") {
    RngStream r(63, 4);
    CHECK_THROWS_AS(hitting_time_sample(1.0, -1.0, r), DomainError);
    CHECK_THROWS_AS(hitting_time_sample(0.0, 1.0, r), DomainError);
  }
  SUBCASE("fixed stream reproduces the draws") {
    RngStream a(63, 5), b(63, 5);
    for (int i = 0; i < 100; ++i)
      REQUIRE(hitting_time_sample(2.0, 0.5, a) ==
              hitting_time_sample(2.0, 0.5, b));
  }
}
