#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pathlaw/errors.hpp"
#include "pathlaw/rng.hpp"

namespace pathlaw {

// A matrix of i.i.d. observations, one row per draw, with optional
// nonnegative weights. weights.size() == 0 means unweighted.
struct SamplePool {
  Eigen::MatrixXd rows;
  Eigen::VectorXd weights;

  long n() const { return rows.rows(); }
  long dim() const { return rows.cols(); }
  bool weighted() const { return weights.size() > 0; }
  void validate() const;

  static SamplePool from_values(std::vector<double> values);
  static SamplePool from_matrix(Eigen::MatrixXd m);
};

// Canonical order: ascending for scalar pools, lexicographic rows otherwise.
// Aggregation order then never leaks into test results.
void sort_pool(SamplePool& pool);

struct TestReport {
  std::string test_name;
  double statistic = 0.0;
  std::optional<double> p_value;  // absent for confidence-interval tests
  long n_lhs = 0;
  long n_rhs = 0;
  bool pass = false;
  double threshold = 0.0;
  std::vector<std::pair<std::string, std::string>> details;
};

// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 l^2).
double kolmogorov_sf(double lambda);

struct KsOptions {
  double threshold = 0.001;    // pass iff p >= threshold
  bool allow_small = false;    // lift the n >= 50 gate (unit-test mode)
  std::string name = "ks";
};

// Two-sample Kolmogorov-Smirnov with asymptotic p-value at effective
// n = n1 n2 / (n1 + n2). D is computed exactly as an integer count ratio.
TestReport ks_two_sample(const SamplePool& xs, const SamplePool& ys,
                         const KsOptions& opts = {});

struct EnergyOptions {
  double threshold = 0.01;     // pass iff p >= threshold
  long max_per_side = 2000;    // larger pools are randomly subsampled
  std::string name = "energy";
};

// Multivariate energy-distance permutation test,
// E = 2 E||X-Y|| - E||X-X'|| - E||Y-Y'||, with the observed statistic
// included in the null set. Deterministic given the stream.
TestReport energy_distance_test(const SamplePool& xs, const SamplePool& ys,
                                int n_permutations, RngStream& rng,
                                const EnergyOptions& opts = {});

// Compares the plain mean of lhs with the mean of the weighted rhs
// observations w_i * v_i (excluded rows carry weight 0). Passes when the
// difference is within k_sigma combined standard errors.
TestReport weighted_mean_compare(const SamplePool& lhs, const SamplePool& rhs,
                                 double k_sigma,
                                 const std::string& name = "weighted_mean");

// Family aggregation: pass iff min p >= family_alpha / count.
TestReport bonferroni(const std::vector<TestReport>& reports,
                      double family_alpha);

}  // namespace pathlaw
