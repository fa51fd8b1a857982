#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bucketree/rational.hpp"
#include "bucketree/tree.hpp"
#include "bucketree/weights.hpp"

namespace bucketree {

// Desk-scale ceiling on exhaustive enumeration.
inline constexpr int kDefaultMaxEnumerationSize = 12;

// Power series truncated at a fixed order; index i holds [z^i].
using Series = std::vector<Rational>;

// a * b truncated to degree <= order.
Series series_multiply(const Series& a, const Series& b, int order);

// phi(inner(z)) truncated to degree <= order, by Horner evaluation over
// phi_0..phi_order. Requires inner[0] == 0, so no higher phi_k contributes.
Series compose(const DegreeWeights& phi, const Series& inner, int order);

// Every bucket ordered shape with total capacity n, each exactly once, in a
// deterministic order. Throws ResourceLimit when n > max_size.
std::vector<BucketTree> enumerate_shapes(int b, int n, int max_size = kDefaultMaxEnumerationSize);

// T_n = sum over shapes of w(T) L(T).
Rational total_weight(const WeightModel& m, int n, int max_size = kDefaultMaxEnumerationSize);

// Index n holds T_n for 0 <= n <= n_max, with T_0 = 0.
std::vector<Rational> total_weights(const WeightModel& m, int n_max,
                                    int max_size = kDefaultMaxEnumerationSize);

// Closed forms for the grown families: (n-1)!,
// (n-1)! (d-1)^(n-1) binom(n-1+1/(d-1), n-1), (n-1)! (alpha+1)^(n-1) binom(n-1-1/(alpha+1), n-1).
Rational closed_form_Tn(const FamilySpec& spec, int n);

// Coefficients of the exponential generating function: index n holds T_n/n!
// (index 0 is 0).
Series egf_coefficients(std::span<const Rational> totals);

struct OdeReport {
  bool pass = true;
  int checked = 0;                      // number of identities verified
  std::optional<int> first_failing_n;   // n in T_{n+b} = n! [z^n] phi(T(z))
  std::optional<int> failing_initial_k; // k with T_k != psi_k, k < b
  std::string message;
};

// Checks T_k = psi_k (1 <= k < b) and T_{n+b} = n! [z^n] phi(T(z)) for
// 0 <= n <= N-b, with T computed by total_weight.
OdeReport check_ode_recurrence(const WeightModel& m, int N);

// Same check against caller-supplied totals (index n holds T_n, index 0 unused).
OdeReport check_ode_recurrence(const WeightModel& m, std::span<const Rational> totals);

}  // namespace bucketree
