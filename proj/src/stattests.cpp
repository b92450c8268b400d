#include "pathlaw/stattests.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace pathlaw {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> column_sorted(const SamplePool& pool) {
  std::vector<double> v(pool.rows.data(), pool.rows.data() + pool.n());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

void SamplePool::validate() const {
  if (rows.rows() == 0 || rows.cols() == 0)
    throw ConfigError("SamplePool: empty pool");
  if (!rows.allFinite())
    throw ConfigError("SamplePool: non-finite entry");
  if (weighted()) {
    if (weights.size() != rows.rows())
      throw ConfigError("SamplePool: weight length mismatch");
    if ((weights.array() < 0.0).any() || !weights.allFinite())
      throw ConfigError("SamplePool: weights must be finite and nonnegative");
    if (weights.sum() <= 0.0)
      throw ConfigError("SamplePool: weights must not all be zero");
  }
}

SamplePool SamplePool::from_values(std::vector<double> values) {
  SamplePool pool;
  pool.rows = Eigen::Map<Eigen::VectorXd>(values.data(),
                                          static_cast<long>(values.size()));
  return pool;
}

SamplePool SamplePool::from_matrix(Eigen::MatrixXd m) {
  SamplePool pool;
  pool.rows = std::move(m);
  return pool;
}

void sort_pool(SamplePool& pool) {
  if (pool.weighted()) return;  // weighted pools keep row pairing as built
  const long n = pool.n(), d = pool.dim();
  if (d == 1) {
    std::sort(pool.rows.data(), pool.rows.data() + n);
    return;
  }
  std::vector<long> idx(n);
  std::iota(idx.begin(), idx.end(), 0L);
  std::sort(idx.begin(), idx.end(), [&](long a, long b) {
    for (long c = 0; c < d; ++c) {
      if (pool.rows(a, c) < pool.rows(b, c)) return true;
      if (pool.rows(a, c) > pool.rows(b, c)) return false;
    }
    return false;
  });
  Eigen::MatrixXd out(n, d);
  for (long i = 0; i < n; ++i) out.row(i) = pool.rows.row(idx[i]);
  pool.rows = std::move(out);
}

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  const double f = -2.0 * lambda * lambda;
  double sum = 0.0, sign = 1.0, prev_term = 0.0;
  for (int j = 1; j <= 128; ++j) {
    const double term = 2.0 * std::exp(f * j * j);
    sum += sign * term;
    if (term <= 1e-10 * sum || term <= 0.5e-3 * prev_term)
      return std::clamp(sum, 0.0, 1.0);
    prev_term = term;
    sign = -sign;
  }
  return 1.0;  // series failed to converge: lambda tiny, distributions agree
}

TestReport ks_two_sample(const SamplePool& xs, const SamplePool& ys,
                         const KsOptions& opts) {
  xs.validate();
  ys.validate();
  if (xs.weighted() || ys.weighted())
    throw DomainError("ks_two_sample: weighted pools are unsupported");
  if (xs.dim() != 1 || ys.dim() != 1)
    throw ConfigError("ks_two_sample: pools must be one-dimensional");
  const long n1 = xs.n(), n2 = ys.n();
  if (!opts.allow_small && (n1 < 50 || n2 < 50))
    throw ConfigError("ks_two_sample: need at least 50 samples per side");

  const std::vector<double> a = column_sorted(xs), b = column_sorted(ys);
  // D as an exact integer count: max |i*n2 - j*n1| / (n1*n2).
  std::int64_t best = 0;
  long i = 0, j = 0;
  while (i < n1 && j < n2) {
    const double v = std::min(a[i], b[j]);
    while (i < n1 && a[i] == v) ++i;
    while (j < n2 && b[j] == v) ++j;
    best = std::max(best, std::abs(static_cast<std::int64_t>(i) * n2 -
                                   static_cast<std::int64_t>(j) * n1));
  }
  const double d_stat =
      static_cast<double>(best) / (static_cast<double>(n1) * n2);

  const double ne = static_cast<double>(n1) * n2 / (n1 + n2);
  const double sqne = std::sqrt(ne);
  const double lambda = (sqne + 0.12 + 0.11 / sqne) * d_stat;
  const double p = kolmogorov_sf(lambda);

  TestReport r;
  r.test_name = opts.name;
  r.statistic = d_stat;
  r.p_value = p;
  r.n_lhs = n1;
  r.n_rhs = n2;
  r.threshold = opts.threshold;
  r.pass = p >= opts.threshold;
  r.details.emplace_back("lambda", fmt(lambda));
  return r;
}

namespace {

// Energy statistic from the pooled distance matrix for the group whose
// sorted member indices are in g; V-statistic normalization.
double energy_stat(const std::vector<float>& dist,
                   const std::vector<double>& row_sums, long n_total,
                   const std::vector<long>& g, long m2) {
  const long m1 = static_cast<long>(g.size());
  double sxx2 = 0.0;  // ordered within-group sum
  for (std::size_t ii = 0; ii < g.size(); ++ii) {
    const float* row = dist.data() + g[ii] * n_total;
    double acc = 0.0;
    for (std::size_t jj = ii + 1; jj < g.size(); ++jj) acc += row[g[jj]];
    sxx2 += acc;
  }
  sxx2 *= 2.0;
  double w = 0.0;
  for (long i : g) w += row_sums[i];
  const double total = std::accumulate(row_sums.begin(), row_sums.end(), 0.0);
  const double sxy = w - sxx2;
  const double syy2 = total - 2.0 * w + sxx2;
  return 2.0 * sxy / (static_cast<double>(m1) * m2) -
         sxx2 / (static_cast<double>(m1) * m1) -
         syy2 / (static_cast<double>(m2) * m2);
}

Eigen::MatrixXd maybe_subsample(const SamplePool& pool, long cap,
                                RngStream& rng) {
  if (pool.n() <= cap) return pool.rows;
  std::vector<long> idx(pool.n());
  std::iota(idx.begin(), idx.end(), 0L);
  for (long k = 0; k < cap; ++k) {
    const long j = k + static_cast<long>(rng.next_below(
                           static_cast<std::uint64_t>(pool.n() - k)));
    std::swap(idx[k], idx[j]);
  }
  Eigen::MatrixXd out(cap, pool.dim());
  for (long k = 0; k < cap; ++k) out.row(k) = pool.rows.row(idx[k]);
  return out;
}

}  // namespace

TestReport energy_distance_test(const SamplePool& xs, const SamplePool& ys,
                                int n_permutations, RngStream& rng,
                                const EnergyOptions& opts) {
  xs.validate();
  ys.validate();
  if (xs.weighted() || ys.weighted())
    throw DomainError("energy_distance_test: weighted pools are unsupported");
  if (xs.dim() != ys.dim())
    throw ConfigError("energy_distance_test: dimension mismatch");
  if (n_permutations < 200)
    throw ConfigError("energy_distance_test: need at least 200 permutations");

  const Eigen::MatrixXd xr = maybe_subsample(xs, opts.max_per_side, rng);
  const Eigen::MatrixXd yr = maybe_subsample(ys, opts.max_per_side, rng);
  const long m1 = xr.rows(), m2 = yr.rows(), n_total = m1 + m2;
  const long d = xr.cols();

  Eigen::MatrixXd pooled(n_total, d);
  pooled.topRows(m1) = xr;
  pooled.bottomRows(m2) = yr;

  // Standardize coordinates by pooled mean/sd: scale-free and still
  // exchangeable under the null. Coordinates that are constant up to
  // rounding stay unscaled; dividing by an ulp-sized sd would turn pure
  // floating-point noise into an order-one signal.
  for (long c = 0; c < d; ++c) {
    const double mean = pooled.col(c).mean();
    const double sd = std::sqrt(
        (pooled.col(c).array() - mean).square().sum() / (n_total - 1));
    if (sd > 1e-9 * (1.0 + std::abs(mean)))
      pooled.col(c) = (pooled.col(c).array() - mean) / sd;
  }

  // Pairwise Euclidean distances, float storage to halve memory traffic
  // over the permutation loop; sums accumulate in double.
  std::vector<float> dist(static_cast<std::size_t>(n_total) * n_total);
  for (long i = 0; i < n_total; ++i) {
    dist[i * n_total + i] = 0.0f;
    for (long j = i + 1; j < n_total; ++j) {
      const float v = static_cast<float>(
          std::sqrt((pooled.row(i) - pooled.row(j)).squaredNorm()));
      dist[i * n_total + j] = v;
      dist[j * n_total + i] = v;
    }
  }
  std::vector<double> row_sums(n_total, 0.0);
  for (long i = 0; i < n_total; ++i) {
    double acc = 0.0;
    const float* row = dist.data() + i * n_total;
    for (long j = 0; j < n_total; ++j) acc += row[j];
    row_sums[i] = acc;
  }

  std::vector<long> g(m1);
  std::iota(g.begin(), g.end(), 0L);
  const double observed = energy_stat(dist, row_sums, n_total, g, m2);

  std::vector<long> idx(n_total);
  int at_least = 0;
  const double cushion = 1e-12 * (1.0 + std::abs(observed));
  for (int perm = 0; perm < n_permutations; ++perm) {
    std::iota(idx.begin(), idx.end(), 0L);
    for (long k = 0; k < m1; ++k) {
      const long j = k + static_cast<long>(rng.next_below(
                             static_cast<std::uint64_t>(n_total - k)));
      std::swap(idx[k], idx[j]);
    }
    g.assign(idx.begin(), idx.begin() + m1);
    std::sort(g.begin(), g.end());
    if (energy_stat(dist, row_sums, n_total, g, m2) >= observed - cushion)
      ++at_least;
  }
  const double p =
      static_cast<double>(1 + at_least) / (n_permutations + 1);

  TestReport r;
  r.test_name = opts.name;
  r.statistic = observed;
  r.p_value = p;
  r.n_lhs = xs.n();
  r.n_rhs = ys.n();
  r.threshold = opts.threshold;
  r.pass = p >= opts.threshold;
  r.details.emplace_back("n_permutations", std::to_string(n_permutations));
  r.details.emplace_back("used_lhs", std::to_string(m1));
  r.details.emplace_back("used_rhs", std::to_string(m2));
  return r;
}

TestReport weighted_mean_compare(const SamplePool& lhs, const SamplePool& rhs,
                                 double k_sigma, const std::string& name) {
  lhs.validate();
  rhs.validate();
  if (lhs.dim() != 1 || rhs.dim() != 1)
    throw ConfigError("weighted_mean_compare: pools must be one-dimensional");
  if (lhs.weighted())
    throw DomainError("weighted_mean_compare: lhs must be unweighted");
  if (!rhs.weighted())
    throw DomainError("weighted_mean_compare: rhs must carry weights");

  const long nl = lhs.n(), nr = rhs.n();
  const double mean_l = lhs.rows.col(0).mean();
  const double var_l =
      (lhs.rows.col(0).array() - mean_l).square().sum() / (nl - 1);

  // The identities being checked have the unnormalized form
  // E[F(lhs)] = E[w F(rhs); event] with E[w; event] = 1, so the rhs
  // estimator is the plain mean of the weighted observations w_i v_i.
  const Eigen::ArrayXd y = rhs.weights.array() * rhs.rows.col(0).array();
  const double mean_r = y.sum() / nr;
  const double var_r = (y - mean_r).square().sum() / (nr - 1);

  const double se = std::sqrt(var_l / nl + var_r / nr);
  const double diff = mean_l - mean_r;

  TestReport r;
  r.test_name = name;
  r.statistic = diff;
  r.n_lhs = nl;
  r.n_rhs = nr;
  r.threshold = k_sigma;
  r.pass = std::abs(diff) <= k_sigma * se;
  r.details.emplace_back("mean_lhs", fmt(mean_l));
  r.details.emplace_back("mean_rhs", fmt(mean_r));
  r.details.emplace_back("combined_se", fmt(se));
  r.details.emplace_back("z_score", fmt(se > 0.0 ? std::abs(diff) / se
                                                 : (diff == 0.0 ? 0.0
                                                                : INFINITY)));
  return r;
}

TestReport bonferroni(const std::vector<TestReport>& reports,
                      double family_alpha) {
  if (reports.empty()) throw ConfigError("bonferroni: empty report list");
  double min_p = 1.0;
  for (const TestReport& r : reports) {
    if (!r.p_value)
      throw ConfigError("bonferroni: member '" + r.test_name +
                        "' has no p-value");
    min_p = std::min(min_p, *r.p_value);
  }
  const double level = family_alpha / static_cast<double>(reports.size());
  TestReport out;
  out.test_name = "bonferroni";
  out.statistic = min_p;
  out.p_value = min_p;
  out.n_lhs = reports.front().n_lhs;
  out.n_rhs = reports.front().n_rhs;
  out.threshold = level;
  out.pass = min_p >= level;
  out.details.emplace_back("family_alpha", fmt(family_alpha));
  out.details.emplace_back("bonferroni_factor",
                           std::to_string(reports.size()));
  return out;
}

}  // namespace pathlaw
