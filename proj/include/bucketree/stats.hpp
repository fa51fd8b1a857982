#pragma once

// Floating-point statistics: goodness of fit of the samplers against exact
// laws, beta moment checks for the descendants statistic, and the
// second-order (martingale tail) Gaussian diagnostic.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bucketree/rational.hpp"
#include "bucketree/weights.hpp"

namespace bucketree {

struct GofReport {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
  double level = 0.01;
  bool pass = true;
  int bins = 0;
};

// Core routine: bins given as (observed count, expected probability).
// Bins with expected count below 5 are pooled. Observations that fall
// outside the support (unexpected_count > 0) make the test fail outright.
GofReport chi_square_from_bins(std::vector<std::pair<double, double>> bins,
                               std::uint64_t unexpected_count, double level);

template <class Key>
GofReport chi_square_gof(const std::map<Key, std::uint64_t>& observed,
                         const std::map<Key, double>& expected, double level) {
  std::vector<std::pair<double, double>> bins;
  std::uint64_t unexpected = 0;
  for (const auto& [k, p] : expected) {
    auto it = observed.find(k);
    bins.emplace_back(it == observed.end() ? 0.0 : static_cast<double>(it->second), p);
  }
  for (const auto& [k, c] : observed) {
    if (!expected.contains(k)) unexpected += c;
  }
  return chi_square_from_bins(std::move(bins), unexpected, level);
}

// s-th raw moment of Beta(a, b2): prod_{i<s} (a+i)/(a+b2+i). Throws
// InvalidArgument for non-positive parameters.
Rational beta_moment(const Rational& a, const Rational& b2, int s);

// Mergeable running moments (count, mean, central moments up to order 4).
class MomentSketch {
 public:
  void add(double x);
  void merge(const MomentSketch& other);

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;  // population variance
  double skewness() const;
  double excess_kurtosis() const;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double m3_ = 0.0;
  double m4_ = 0.0;
};

// Chi-square test of sample_tree frequencies against exact_distribution.
GofReport sampler_gof(const FamilySpec& spec, int n, std::uint64_t samples, std::uint64_t seed,
                      double level);

struct MultiSeedGof {
  std::vector<GofReport> runs;
  int failures = 0;
  bool pass = true;  // fails only if at least two seeds fail
};

MultiSeedGof sampler_gof_multi_seed(const FamilySpec& spec, int n, std::uint64_t samples,
                                    std::span<const std::uint64_t> seeds, double level);

struct BetaConvergenceRow {
  int n = 0;
  double mean = 0.0;             // empirical E[Y/n | K]
  double limit_mean = 0.0;       // (K+kappa)/(j+kappa)
  double finite_n_mean = 0.0;    // exact E[Y_n/n | K]
  double mean_se = 0.0;          // sqrt(Var_beta / samples)
  double mean_error = 0.0;       // |mean - limit_mean|
  bool mean_within = false;      // error < z se + |finite_n_mean - limit_mean|
  double second = 0.0;           // empirical E[(Y/n)^2 | K]
  double limit_second = 0.0;
  double finite_n_second = 0.0;
  double second_se = 0.0;
  double second_error = 0.0;
  bool second_within = false;
  double ks_distance = 0.0;      // sup |F_emp - F_beta|
};

struct BetaConvergenceReport {
  std::string cell;   // e.g. "bucket-recursive(b=2) j=4 K=1"
  Rational a = 0;     // K + kappa
  Rational b2 = 0;    // j - K
  std::uint64_t samples = 0;
  std::uint64_t attempts = 0;
  std::vector<BetaConvergenceRow> rows;
  bool trend = false;  // KS distance at the largest n below that at the smallest n
  bool pass = false;   // both moments within bounds at the largest n
};

// Y_{n,j}/n conditioned on K_j = K (rejection on the realised K), simulated
// through the urn; each accepted trajectory is followed through the whole
// n_grid. Requires j > K so the beta law is non-degenerate.
BetaConvergenceReport check_beta_convergence(const FamilySpec& spec, int j, int K,
                                             std::span<const int> n_grid, std::uint64_t samples,
                                             std::uint64_t seed, double z = 4.0, int threads = 1);

struct SecondOrderReport {
  std::string cell;
  int n = 0;
  std::int64_t horizon = 0;
  std::uint64_t trajectories = 0;
  // r = sqrt(n) (Y_n/n - beta_hat), beta_hat = Y_H / H on the same trajectory.
  double raw_mean = 0.0;
  double raw_variance = 0.0;
  double raw_skewness = 0.0;
  double raw_excess_kurtosis = 0.0;
  // z = r / sqrt(beta_hat (1 - beta_hat)), the Gaussian factor of the
  // mixed-normal refinement.
  double std_mean = 0.0;
  double std_variance = 0.0;
  double std_skewness = 0.0;
  double std_excess_kurtosis = 0.0;
  // Least-squares slope of r^2 on beta_hat (1 - beta_hat).
  double variance_slope = 0.0;
  double skew_bound = 0.1;
  double kurtosis_bound = 0.2;
  bool pass = false;
};

SecondOrderReport second_order_diagnostic(const FamilySpec& spec, int j, int K, int n,
                                          std::int64_t horizon, std::uint64_t trajectories,
                                          std::uint64_t seed, double skew_bound = 0.1,
                                          double kurtosis_bound = 0.2, int threads = 1);

}  // namespace bucketree
