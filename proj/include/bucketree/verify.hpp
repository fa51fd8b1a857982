#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bucketree/enumerate.hpp"
#include "bucketree/evolve.hpp"
#include "bucketree/rational.hpp"
#include "bucketree/tree.hpp"
#include "bucketree/weights.hpp"

namespace bucketree {

// sum_{k<b} m_k psi_{k+1}/psi_k + sum_k n_k (k+1) psi_1 phi_{k+1}/phi_k,
// with psi_b := phi_0. Throws InvalidArgument if a configuration present in
// the tree has a zero weight in a denominator.
Rational balance_value(const BucketTree& t, const WeightModel& m);

struct BalanceEntry {
  std::string shape;  // canonical encoding of the shape
  Rational value;
};

struct BalanceReport {
  int n = 0;
  std::vector<BalanceEntry> values;
  std::optional<Rational> constant;  // C_n when pass
  bool pass = false;
};

// Evaluates the balance sum over every positive-weight tree of size n. The sum
// only depends on the shape, so each shape stands for all of its labellings.
BalanceReport check_balance(const WeightModel& m, int n,
                            int max_size = kDefaultMaxEnumerationSize);

struct AffineRatioReport {
  bool pass = false;
  Rational c1 = 0;
  Rational c2 = 0;
  std::optional<int> first_failing_n;  // n with T_{n+1}/T_n != c1 n + c2
  std::vector<Rational> totals;        // index n holds T_n
  std::string message;
};

// Fits c1, c2 from T_2/T_1 and T_3/T_2, then checks T_{n+1}/T_n = c1 n + c2
// for every n < n_max.
AffineRatioReport check_affine_ratio(const WeightModel& m, int n_max,
                                     int max_size = kDefaultMaxEnumerationSize);

struct LawComparison {
  bool pass = false;
  int n = 0;
  int shapes_compared = 0;
  std::optional<std::string> first_mismatch;  // canonical shape encoding
};

// Compares w(T)/T_n under two models for every shape of size n. Labellings of
// one shape share a probability, so shapes suffice.
LawComparison compare_tree_laws(const WeightModel& lhs, const WeightModel& rhs, int n,
                                int max_size = kDefaultMaxEnumerationSize);

// Compares m with m.scaled(a, s) at size n.
LawComparison check_scaling(const WeightModel& m, const Rational& a, const Rational& s, int n,
                            int max_size = kDefaultMaxEnumerationSize);

struct Classification {
  bool grown = false;
  std::optional<FamilySpec> family;
  // m equals weights_of(*family).scaled(a, s) on the probed range.
  Rational a = 0;
  Rational s = 0;
  std::vector<Rational> beta;   // beta_1..beta_{b-1}
  std::vector<Rational> gamma;  // gamma_0, gamma_1, ... while phi_k > 0
  std::optional<int> gamma_difference_sign;
  std::string reason;
};

// Classifies a weight model as one of the grown families (up to scaling) or
// as not grown, from beta_k = psi_{k+1}/psi_k and
// gamma_k = (k+1) psi_1 phi_{k+1}/phi_k, probing phi_0..phi_{n_probe}.
// Throws InvalidArgument when the ratios cannot be formed or the model is
// the degenerate chain family.
Classification classify_family(const WeightModel& m, int n_probe = 12);

struct DistributionCheck {
  bool pass = false;
  int n = 0;
  int j = 0;                                  // stripped size (preservation only)
  std::size_t trees_compared = 0;
  std::optional<std::string> first_mismatch;  // canonical tree encoding
  std::string message;
};

// The evolution process law at size n against w(t)/T_n: every tree in the
// support must match exactly, and the support must hold every labelled tree
// of positive weight.
DistributionCheck check_distribution_equivalence(const FamilySpec& spec, int n,
                                                 int max_size = kDefaultMaxExactSize);

// Stripping labels above j from the size-n law gives the size-j law, for
// every 1 <= j <= n. Reports the first failing j.
DistributionCheck check_preservation(const FamilySpec& spec, int n,
                                     int max_size = kDefaultMaxExactSize);

}  // namespace bucketree
