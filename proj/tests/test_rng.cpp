#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "pathlaw/rng.hpp"

using pathlaw::RngStream;

// Frozen reference blocks generated with numpy.random.Philox (key set to
// (seed, stream_id), counter zeroed): the stream must reproduce them
// word for word.
TEST_CASE("philox matches reference vectors") {
  {
    RngStream r(0, 0);
    const std::uint64_t want[8] = {
        0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL, 0x1c8667a55d902e79ULL,
        0x907d7a052fd5b4dcULL, 0x809bf322883987c3ULL, 0x471128b9e807f7ddULL,
        0xf250ba0dbec065b7ULL, 0xfc6ed66767a457bcULL};
    for (std::uint64_t w : want) CHECK(r.next_u64() == w);
  }
  {
    RngStream r(42, 7);
    const std::uint64_t want[8] = {
        0xa64064f34e84b9a3ULL, 0xe287959a866a08fdULL, 0x8dc181f009b96c03ULL,
        0xf3f6001d4fa83454ULL, 0x69c633ee791df6b3ULL, 0x89327f7a8f0127a4ULL,
        0x1ed8260458996ff6ULL, 0x4299f7433fb1683eULL};
    for (std::uint64_t w : want) CHECK(r.next_u64() == w);
  }
}

TEST_CASE("identical keys reproduce identical sequences") {
  RngStream a(123456789, 42), b(123456789, 42);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());

  RngStream c(123456789, 42), d(123456789, 42);
  for (int i = 0; i < 1000; ++i) {
    const double x = c.next_gaussian(), y = d.next_gaussian();
    REQUIRE(x == y);
  }
}

TEST_CASE("distinct streams differ and look independent") {
  RngStream a(7, 0), b(7, 1);
  bool any_diff = false;
  double sum_ab = 0, sum_a = 0, sum_b = 0, sum_a2 = 0, sum_b2 = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = a.next_uniform(), y = b.next_uniform();
    any_diff |= x != y;
    sum_ab += x * y;
    sum_a += x;
    sum_b += y;
    sum_a2 += x * x;
    sum_b2 += y * y;
  }
  CHECK(any_diff);
  const double cov = sum_ab / n - (sum_a / n) * (sum_b / n);
  const double var_a = sum_a2 / n - (sum_a / n) * (sum_a / n);
  const double var_b = sum_b2 / n - (sum_b / n) * (sum_b / n);
  const double corr = cov / std::sqrt(var_a * var_b);
  CHECK(std::abs(corr) < 4.0 / std::sqrt(static_cast<double>(n)) + 1e-3);
}

TEST_CASE("uniforms stay in the open unit interval") {
  RngStream r(1, 2);
  for (int i = 0; i < 200000; ++i) {
    const double u = r.next_uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("gaussian moments") {
  RngStream r(2024, 0);
  const int n = 1000000;
  double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double g = r.next_gaussian();
    s1 += g;
    s2 += g * g;
    s3 += g * g * g;
    s4 += g * g * g * g;
  }
  CHECK(std::abs(s1 / n) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(std::abs(s3 / n) < 0.02);
  CHECK(s4 / n == doctest::Approx(3.0).epsilon(0.03));
}

TEST_CASE("next_below covers its range uniformly") {
  RngStream r(9, 9);
  std::vector<int> counts(10, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[r.next_below(10)];
  for (int c : counts) {
    CHECK(c > n / 10 - 5 * 100);  // ~5 sigma of binomial(n, 0.1)
    CHECK(c < n / 10 + 5 * 100);
  }
}
