#pragma once

#include <cstdint>
#include <map>

#include "bucketree/evolve.hpp"
#include "bucketree/rational.hpp"
#include "bucketree/rng.hpp"
#include "bucketree/tree.hpp"
#include "bucketree/weights.hpp"

namespace bucketree {

inline constexpr int kDefaultMaxUrnDraws = 400;

// Two-colour balanced Polya urn: a drawn ball is returned together with sigma
// more of its colour. Masses are exact rationals.
struct UrnState {
  Rational white;
  Rational black;
  Rational sigma;

  Rational total() const { return white + black; }
};

// Initial urn for the descendants of label j given its initial bucket size K:
//   bucket recursive   W0 = K,             B0 = j-K,             sigma = 1
//   (b,d)-ary          W0 = (d-1)K+1,      B0 = (d-1)(j-K),      sigma = d-1
//   (b,alpha)-PORT     W0 = (alpha+1)K-1,  B0 = (alpha+1)(j-K),  sigma = alpha+1
UrnState urn_from(const FamilySpec& spec, int j, int K);

// Exact urn simulation on integer-scaled masses. All masses are multiplied by
// the common denominator of (W0, B0, sigma), so each draw is one uniform
// integer below the scaled total.
class UrnProcess {
 public:
  explicit UrnProcess(const UrnState& u);

  void step(CounterRng& rng);
  void run(std::int64_t draws, CounterRng& rng);

  Rational white() const;
  Rational black() const;
  std::int64_t draws() const { return draws_; }

  // Scaled integer masses (for fast floating-point summaries).
  std::uint64_t scaled_white() const { return white_; }
  std::uint64_t scaled_total() const { return white_ + black_; }
  std::uint64_t scale() const { return scale_; }

 private:
  std::uint64_t white_ = 0;
  std::uint64_t black_ = 0;
  std::uint64_t sigma_ = 0;
  std::uint64_t scale_ = 1;
  std::int64_t draws_ = 0;
};

// W_N after N draws.
Rational urn_run(const UrnState& u, int N, CounterRng& rng);

// Exact law of W_N (value -> probability) by dynamic programming over the
// number of white draws. Throws ResourceLimit when N > max_draws.
std::map<Rational, Rational> urn_distribution_exact(const UrnState& u, int N,
                                                    int max_draws = kDefaultMaxUrnDraws);

// E binom(W_N/sigma + s - 1, s)
//   = binom(W_0/sigma + s - 1, s) (T_{N+s-1} ... T_N) / (T_{s-1} ... T_0),
// with T_i = sigma i + T_0.
Rational urn_moment_exact(const UrnState& u, int N, int s);

// E binom(W/sigma + s - 1, s) under an explicit law of W.
Rational binomial_moment(const std::map<Rational, Rational>& law, const Rational& sigma, int s);

// Maps an urn white mass back to the descendants count:
//   W-K+1,  (W-1)/sigma-K+1,  (W+1)/sigma-K+1.
Rational descendants_from_white(const FamilySpec& spec, const Rational& white, int K);

struct DescendantSample {
  int n = 0;
  int j = 0;
  int K = 0;  // initial bucket size of label j
  int Y = 0;  // labels >= j in the subtree rooted at j's bucket
};

// Number of labels >= j in the subtree rooted at the bucket holding j.
int descendants_of(const BucketTree& t, int j);

// Number of labels <= j in the bucket holding j, i.e. that bucket's capacity
// right after j was inserted.
int initial_bucket_size(const BucketTree& t, int j);

// Grows a tree to size j to realise K_j, then runs the urn for n-j draws.
DescendantSample descendants_via_urn(const FamilySpec& spec, int n, int j, CounterRng& rng);

// Grows the whole tree to size n and counts.
DescendantSample descendants_direct(const FamilySpec& spec, int n, int j, CounterRng& rng);

// Exact law of K_j from the size-j tree law.
std::map<int, Rational> initial_bucket_law(const FamilySpec& spec, int j,
                                           int max_size = kDefaultMaxExactSize);

// Exact law of Y_{n,j} read off the size-n tree law.
std::map<int, Rational> descendants_law_from_trees(const FamilySpec& spec, int n, int j,
                                                   int max_size = kDefaultMaxExactSize);

// Exact law of Y_{n,j} as the K_j-mixture of urn laws pushed through the
// shift maps.
std::map<int, Rational> descendants_law_from_urn(const FamilySpec& spec, int n, int j,
                                                 int max_size = kDefaultMaxExactSize);

}  // namespace bucketree
