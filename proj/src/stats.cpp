#include "bucketree/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "bucketree/error.hpp"
#include "bucketree/evolve.hpp"
#include "bucketree/rng.hpp"
#include "bucketree/urn.hpp"

namespace bucketree {

// ------------------------------------------------------------ chi-square

GofReport chi_square_from_bins(std::vector<std::pair<double, double>> bins,
                               std::uint64_t unexpected_count, double level) {
  GofReport r;
  r.level = level;
  double total = 0.0;
  for (const auto& [obs, p] : bins) total += obs;
  total += static_cast<double>(unexpected_count);
  if (total <= 0.0) throw InvalidArgument("chi-square test needs at least one observation");
  if (unexpected_count > 0) {
    r.statistic = std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
    r.pass = false;
    r.bins = static_cast<int>(bins.size());
    return r;
  }
  std::sort(bins.begin(), bins.end(),
            [](const auto& x, const auto& y) { return x.second > y.second; });
  std::vector<std::pair<double, double>> pooled;  // (observed, expected count)
  std::pair<double, double> small{0.0, 0.0};
  for (const auto& [obs, p] : bins) {
    const double e = p * total;
    if (e < 5.0) {
      small.first += obs;
      small.second += e;
    } else {
      pooled.emplace_back(obs, e);
    }
  }
  if (small.second > 0.0 || small.first > 0.0) {
    if (small.second >= 5.0 || pooled.empty()) {
      pooled.push_back(small);
    } else {
      pooled.back().first += small.first;
      pooled.back().second += small.second;
    }
  }
  r.bins = static_cast<int>(pooled.size());
  r.degrees_of_freedom = r.bins - 1;
  for (const auto& [obs, e] : pooled) {
    if (e <= 0.0) {
      if (obs > 0.0) r.statistic = std::numeric_limits<double>::infinity();
      continue;
    }
    r.statistic += (obs - e) * (obs - e) / e;
  }
  if (r.degrees_of_freedom < 1) {
    r.p_value = 1.0;
  } else if (!std::isfinite(r.statistic)) {
    r.p_value = 0.0;
  } else {
    r.p_value = boost::math::gamma_q(r.degrees_of_freedom / 2.0, r.statistic / 2.0);
  }
  r.pass = r.p_value >= level;
  return r;
}

// ------------------------------------------------------------ beta moments

Rational beta_moment(const Rational& a, const Rational& b2, int s) {
  if (a <= 0 || b2 <= 0) throw InvalidArgument("beta parameters must be positive");
  if (s < 0) throw InvalidArgument("moment order must be non-negative");
  Rational m = 1;
  for (int i = 0; i < s; ++i) m *= (a + i) / (a + b2 + i);
  return m;
}

// ------------------------------------------------------------ moment sketch

void MomentSketch::add(double x) {
  MomentSketch one;
  one.n_ = 1;
  one.mean_ = x;
  merge(one);
}

void MomentSketch::merge(const MomentSketch& o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(o.n_);
  const double n = na + nb;
  const double d = o.mean_ - mean_;
  const double d2 = d * d;
  const double m2 = m2_ + o.m2_ + d2 * na * nb / n;
  const double m3 = m3_ + o.m3_ + d2 * d * na * nb * (na - nb) / (n * n) +
                    3.0 * d * (na * o.m2_ - nb * m2_) / n;
  const double m4 = m4_ + o.m4_ + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                    6.0 * d2 * (na * na * o.m2_ + nb * nb * m2_) / (n * n) +
                    4.0 * d * (na * o.m3_ - nb * m3_) / n;
  n_ += o.n_;
  mean_ += d * nb / n;
  m2_ = m2;
  m3_ = m3;
  m4_ = m4;
}

double MomentSketch::variance() const { return n_ ? m2_ / static_cast<double>(n_) : 0.0; }

double MomentSketch::skewness() const {
  if (n_ == 0 || m2_ == 0.0) return 0.0;
  return std::sqrt(static_cast<double>(n_)) * m3_ / std::pow(m2_, 1.5);
}

double MomentSketch::excess_kurtosis() const {
  if (n_ == 0 || m2_ == 0.0) return 0.0;
  return static_cast<double>(n_) * m4_ / (m2_ * m2_) - 3.0;
}

// ------------------------------------------------------------ parallel chunks

namespace {

constexpr std::uint64_t kChunkSize = 1024;

// Runs fn(chunk) for every chunk index; results land in chunk order, so the
// output does not depend on the thread count.
template <class Result, class Fn>
std::vector<Result> run_chunks(std::uint64_t chunks, int threads, Fn fn) {
  std::vector<Result> out(chunks);
  const auto workers = static_cast<std::uint64_t>(std::max(1, threads));
  if (workers == 1 || chunks <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) out[c] = fn(c);
    return out;
  }
  std::vector<std::thread> pool;
  for (std::uint64_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::uint64_t c = w; c < chunks; c += workers) out[c] = fn(c);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

std::uint64_t chunk_count(std::uint64_t total) { return (total + kChunkSize - 1) / kChunkSize; }

std::uint64_t chunk_length(std::uint64_t total, std::uint64_t c) {
  return std::min(kChunkSize, total - c * kChunkSize);
}

// Grows prefixes until label j lands in a bucket of size K.
void require_k(const FamilySpec& spec, int j, int K, CounterRng& rng, std::uint64_t& attempts) {
  const std::uint64_t cap = attempts + 1'000'000;
  while (true) {
    ++attempts;
    if (initial_bucket_size(sample_tree(spec, j, rng), j) == K) return;
    if (attempts >= cap) {
      throw InvalidArgument("too few accepted samples: K_" + std::to_string(j) + " = " +
                            std::to_string(K) + " is (nearly) impossible");
    }
  }
}

std::string cell_name(const FamilySpec& spec, int j, int K) {
  return spec.describe() + " j=" + std::to_string(j) + " K=" + std::to_string(K);
}

}  // namespace

// ------------------------------------------------------------ sampler GoF

GofReport sampler_gof(const FamilySpec& spec, int n, std::uint64_t samples, std::uint64_t seed,
                      double level) {
  const TreeDistribution exact = exact_distribution(spec, n);
  std::map<std::string, double> expected;
  for (const auto& [key, p] : exact.probabilities) expected[key] = to_double(p);
  std::map<std::string, std::uint64_t> observed;
  CounterRng rng(seed);
  for (std::uint64_t i = 0; i < samples; ++i) ++observed[canonical_encode(sample_tree(spec, n, rng))];
  return chi_square_gof(observed, expected, level);
}

MultiSeedGof sampler_gof_multi_seed(const FamilySpec& spec, int n, std::uint64_t samples,
                                    std::span<const std::uint64_t> seeds, double level) {
  MultiSeedGof out;
  for (auto seed : seeds) {
    out.runs.push_back(sampler_gof(spec, n, samples, seed, level));
    if (!out.runs.back().pass) ++out.failures;
  }
  out.pass = out.failures < 2;
  return out;
}

// ------------------------------------------------------------ beta convergence

BetaConvergenceReport check_beta_convergence(const FamilySpec& spec, int j, int K,
                                             std::span<const int> n_grid, std::uint64_t samples,
                                             std::uint64_t seed, double z, int threads) {
  if (K < 1 || K > spec.bucket_size() || K >= j) {
    throw InvalidArgument("beta convergence needs 1 <= K <= b and K < j");
  }
  if (n_grid.empty() || samples == 0) throw InvalidArgument("empty n grid or sample budget");
  std::vector<int> grid(n_grid.begin(), n_grid.end());
  std::sort(grid.begin(), grid.end());
  if (grid.front() < j) throw InvalidArgument("grid sizes must be at least j");

  BetaConvergenceReport rep;
  rep.cell = cell_name(spec, j, K);
  rep.a = K + spec.kappa();
  rep.b2 = j - K;
  rep.samples = samples;

  struct ChunkResult {
    std::vector<std::vector<double>> values;  // per grid entry
    std::uint64_t attempts = 0;
  };
  const CounterRng master(seed);
  const UrnState start = urn_from(spec, j, K);
  auto chunks = run_chunks<ChunkResult>(chunk_count(samples), threads, [&](std::uint64_t c) {
    ChunkResult res;
    res.values.resize(grid.size());
    CounterRng rng = master.split(c);
    const std::uint64_t len = chunk_length(samples, c);
    for (std::uint64_t i = 0; i < len; ++i) {
      require_k(spec, j, K, rng, res.attempts);
      UrnProcess urn(start);
      for (std::size_t g = 0; g < grid.size(); ++g) {
        urn.run(grid[g] - j - urn.draws(), rng);
        const Rational y = descendants_from_white(spec, urn.white(), K);
        res.values[g].push_back(to_double(y) / grid[g]);
      }
    }
    return res;
  });

  const double m1 = to_double(beta_moment(rep.a, rep.b2, 1));
  const double m2 = to_double(beta_moment(rep.a, rep.b2, 2));
  const double m4 = to_double(beta_moment(rep.a, rep.b2, 4));
  const double var1 = m2 - m1 * m1;
  const double var2 = m4 - m2 * m2;
  const double ns = static_cast<double>(samples);
  const Rational shift = descendants_from_white(spec, 0, K);

  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::vector<double> vals;
    vals.reserve(samples);
    for (auto& ch : chunks) vals.insert(vals.end(), ch.values[g].begin(), ch.values[g].end());
    BetaConvergenceRow row;
    row.n = grid[g];
    double s1 = 0.0, s2 = 0.0;
    for (double v : vals) {
      s1 += v;
      s2 += v * v;
    }
    row.mean = s1 / ns;
    row.second = s2 / ns;
    row.limit_mean = m1;
    row.limit_second = m2;

    // Exact finite-n moments: Y = W/sigma + shift, with binomial moments of W/sigma.
    const int draws = grid[g] - j;
    const Rational bm1 = urn_moment_exact(start, draws, 1);
    const Rational bm2 = urn_moment_exact(start, draws, 2);
    const Rational ex2 = 2 * bm2 - bm1;
    const Rational ey = bm1 + shift;
    const Rational ey2 = ex2 + 2 * shift * bm1 + shift * shift;
    const Rational nn = grid[g];
    row.finite_n_mean = to_double(ey / nn);
    row.finite_n_second = to_double(ey2 / (nn * nn));

    row.mean_se = std::sqrt(var1 / ns);
    row.second_se = std::sqrt(var2 / ns);
    row.mean_error = std::abs(row.mean - m1);
    row.second_error = std::abs(row.second - m2);
    row.mean_within = row.mean_error < z * row.mean_se + std::abs(row.finite_n_mean - m1);
    row.second_within = row.second_error < z * row.second_se + std::abs(row.finite_n_second - m2);

    std::sort(vals.begin(), vals.end());
    const double a = to_double(rep.a);
    const double b2 = to_double(rep.b2);
    double ks = 0.0;
    for (std::size_t i = 0; i < vals.size();) {
      std::size_t k = i;
      while (k < vals.size() && vals[k] == vals[i]) ++k;
      const double x = std::clamp(vals[i], 0.0, 1.0);
      const double f = boost::math::ibeta(a, b2, x);
      ks = std::max({ks, std::abs(static_cast<double>(i) / ns - f),
                     std::abs(static_cast<double>(k) / ns - f)});
      i = k;
    }
    row.ks_distance = ks;
    rep.rows.push_back(row);
  }
  for (const auto& ch : chunks) rep.attempts += ch.attempts;
  rep.trend = rep.rows.size() < 2 || rep.rows.back().ks_distance < rep.rows.front().ks_distance;
  rep.pass = rep.rows.back().mean_within && rep.rows.back().second_within;
  return rep;
}

// ------------------------------------------------------------ second order

SecondOrderReport second_order_diagnostic(const FamilySpec& spec, int j, int K, int n,
                                          std::int64_t horizon, std::uint64_t trajectories,
                                          std::uint64_t seed, double skew_bound,
                                          double kurtosis_bound, int threads) {
  if (K < 1 || K > std::min(j, spec.bucket_size())) {
    throw InvalidArgument("second-order diagnostic needs 1 <= K <= min(j, b)");
  }
  if (n < j || horizon <= n || trajectories == 0) {
    throw InvalidArgument("second-order diagnostic needs j <= n < horizon and trajectories > 0");
  }
  SecondOrderReport rep;
  rep.cell = cell_name(spec, j, K);
  rep.n = n;
  rep.horizon = horizon;
  rep.trajectories = trajectories;
  rep.skew_bound = skew_bound;
  rep.kurtosis_bound = kurtosis_bound;

  struct ChunkResult {
    MomentSketch raw;
    MomentSketch standardized;
    // sums for the regression of r^2 on v = beta_hat (1 - beta_hat)
    double sv = 0.0, sv2 = 0.0, sr2 = 0.0, svr2 = 0.0;
    std::uint64_t attempts = 0;
  };
  const CounterRng master(seed);
  const UrnState start = urn_from(spec, j, K);
  const double sigma = to_double(spec.sigma());
  const double shift = to_double(descendants_from_white(spec, 0, K));
  const double scale_n = std::sqrt(static_cast<double>(n));
  auto chunks = run_chunks<ChunkResult>(chunk_count(trajectories), threads, [&](std::uint64_t c) {
    ChunkResult res;
    CounterRng rng = master.split(c);
    const std::uint64_t len = chunk_length(trajectories, c);
    for (std::uint64_t i = 0; i < len; ++i) {
      require_k(spec, j, K, rng, res.attempts);
      UrnProcess urn(start);
      auto y_now = [&] {
        const double w = static_cast<double>(urn.scaled_white()) / static_cast<double>(urn.scale());
        return w / sigma + shift;
      };
      urn.run(n - j, rng);
      const double yn = y_now();
      urn.run(horizon - j - urn.draws(), rng);
      const double beta_hat = y_now() / static_cast<double>(horizon);
      const double r = scale_n * (yn / n - beta_hat);
      const double v = beta_hat * (1.0 - beta_hat);
      res.raw.add(r);
      res.standardized.add(v > 0.0 ? r / std::sqrt(v) : 0.0);
      res.sv += v;
      res.sv2 += v * v;
      res.sr2 += r * r;
      res.svr2 += v * r * r;
    }
    return res;
  });

  MomentSketch raw, standardized;
  double sv = 0.0, sv2 = 0.0, sr2 = 0.0, svr2 = 0.0;
  for (const auto& ch : chunks) {
    raw.merge(ch.raw);
    standardized.merge(ch.standardized);
    sv += ch.sv;
    sv2 += ch.sv2;
    sr2 += ch.sr2;
    svr2 += ch.svr2;
  }
  const double m = static_cast<double>(trajectories);
  const double denom = m * sv2 - sv * sv;
  rep.variance_slope = denom != 0.0 ? (m * svr2 - sv * sr2) / denom : 0.0;
  rep.raw_mean = raw.mean();
  rep.raw_variance = raw.variance();
  rep.raw_skewness = raw.skewness();
  rep.raw_excess_kurtosis = raw.excess_kurtosis();
  rep.std_mean = standardized.mean();
  rep.std_variance = standardized.variance();
  rep.std_skewness = standardized.skewness();
  rep.std_excess_kurtosis = standardized.excess_kurtosis();
  rep.pass = std::abs(rep.std_skewness) < skew_bound &&
             std::abs(rep.std_excess_kurtosis) < kurtosis_bound;
  return rep;
}

}  // namespace bucketree
