#include "bucketree/verify.hpp"

#include <algorithm>

#include "bucketree/error.hpp"

namespace bucketree {

Rational balance_value(const BucketTree& t, const WeightModel& m) {
  if (t.bucket_size() != m.bucket_size()) throw InvalidArgument("bucket size mismatch");
  const int b = m.bucket_size();
  const NodeCensus c = census(t);
  Rational value = 0;
  for (int k = 1; k < b; ++k) {
    const int count = c.unsaturated_count(k);
    if (count == 0) continue;
    const Rational den = m.psi_at(k);
    if (den == 0) throw InvalidArgument("psi_" + std::to_string(k) + " = 0 for a present bucket");
    value += count * m.psi_at(k + 1) / den;
  }
  const Rational psi1 = m.psi_at(1);
  for (const auto& [k, count] : c.saturated) {
    const Rational den = m.phi_at(k);
    if (den == 0) throw InvalidArgument("phi_" + std::to_string(k) + " = 0 for a present bucket");
    value += count * (k + 1) * psi1 * m.phi_at(k + 1) / den;
  }
  return value;
}

BalanceReport check_balance(const WeightModel& m, int n, int max_size) {
  BalanceReport r;
  r.n = n;
  for (const auto& shape : enumerate_shapes(m.bucket_size(), n, max_size)) {
    if (tree_weight(shape, m) == 0) continue;
    r.values.push_back({canonical_encode(shape), balance_value(shape, m)});
  }
  r.pass = true;
  for (const auto& e : r.values) {
    if (e.value != r.values.front().value) r.pass = false;
  }
  if (r.pass && !r.values.empty()) r.constant = r.values.front().value;
  return r;
}

AffineRatioReport check_affine_ratio(const WeightModel& m, int n_max, int max_size) {
  if (n_max < 3) throw InvalidArgument("affine ratio check needs n_max >= 3");
  AffineRatioReport r;
  r.totals = total_weights(m, n_max, max_size);
  for (int n = 1; n <= n_max; ++n) {
    if (r.totals[static_cast<std::size_t>(n)] == 0) {
      r.message = "T_" + std::to_string(n) + " = 0";
      r.first_failing_n = n;
      return r;
    }
  }
  auto ratio = [&](int n) -> Rational {
    return r.totals[static_cast<std::size_t>(n + 1)] / r.totals[static_cast<std::size_t>(n)];
  };
  const Rational r1 = ratio(1);
  const Rational r2 = ratio(2);
  r.c1 = r2 - r1;
  r.c2 = 2 * r1 - r2;
  for (int n = 1; n < n_max; ++n) {
    if (ratio(n) != r.c1 * n + r.c2) {
      r.first_failing_n = n;
      r.message = "T_" + std::to_string(n + 1) + "/T_" + std::to_string(n) + " = " +
                  to_string(ratio(n)) + " but c1 n + c2 = " + to_string(r.c1 * n + r.c2);
      return r;
    }
  }
  r.pass = true;
  r.message = "T_{n+1}/T_n = " + to_string(r.c1) + " n + " + to_string(r.c2) + " for n < " +
              std::to_string(n_max);
  return r;
}

LawComparison compare_tree_laws(const WeightModel& lhs, const WeightModel& rhs, int n,
                                int max_size) {
  if (lhs.bucket_size() != rhs.bucket_size()) throw InvalidArgument("bucket size mismatch");
  LawComparison r;
  r.n = n;
  const Rational tl = total_weight(lhs, n, max_size);
  const Rational tr = total_weight(rhs, n, max_size);
  if (tl == 0 || tr == 0) throw InvalidArgument("total weight vanishes at size " + std::to_string(n));
  r.pass = true;
  for (const auto& shape : enumerate_shapes(lhs.bucket_size(), n, max_size)) {
    ++r.shapes_compared;
    if (tree_weight(shape, lhs) / tl != tree_weight(shape, rhs) / tr) {
      r.pass = false;
      r.first_mismatch = canonical_encode(shape);
      break;
    }
  }
  return r;
}

LawComparison check_scaling(const WeightModel& m, const Rational& a, const Rational& s, int n,
                            int max_size) {
  return compare_tree_laws(m, m.scaled(a, s), n, max_size);
}

Classification classify_family(const WeightModel& m, int n_probe) {
  const int b = m.bucket_size();
  Classification r;
  for (int k = 1; k <= b; ++k) {
    if (m.psi_at(k) == 0) {
      throw InvalidArgument("psi_" + std::to_string(k) + " = 0; bucket ratios are undefined");
    }
  }
  for (int k = 1; k < b; ++k) r.beta.push_back(m.psi_at(k + 1) / m.psi_at(k));

  const Rational psi1 = m.psi_at(1);
  int last_positive = 0;
  for (int k = 0; k <= n_probe; ++k) {
    if (m.phi_at(k) > 0) last_positive = k;
  }
  if (last_positive < 2) throw InvalidArgument("degenerate chain family (phi_k = 0 for k >= 2)");
  for (int k = 0; k < n_probe; ++k) {
    if (m.phi_at(k) == 0) break;
    r.gamma.push_back(psi1 * (k + 1) * m.phi_at(k + 1) / m.phi_at(k));
  }
  // gamma stops at the first vanishing phi_k; nothing may reappear after it.
  const int first_zero = static_cast<int>(r.gamma.size());
  if (first_zero < n_probe && last_positive > first_zero) {
    r.reason = "phi_" + std::to_string(first_zero) + " = 0 but phi_" +
               std::to_string(last_positive) + " > 0";
    return r;
  }
  if (r.gamma.size() < 2 || r.gamma[1] == 0) {
    r.reason = "phi_1 or phi_2 vanishes while higher degree weights do not";
    return r;
  }
  const Rational g0 = r.gamma[0];
  const Rational g1 = r.gamma[1];
  const Rational delta = g1 - g0;
  r.gamma_difference_sign = sgn(delta);

  for (std::size_t k = 2; k < r.gamma.size(); ++k) {
    if (r.gamma[k] != Rational(static_cast<long>(k)) * delta + g0) {
      r.reason = "gamma_" + std::to_string(k) + " breaks gamma_k = k (gamma_1 - gamma_0) + gamma_0";
      return r;
    }
  }
  for (int k = 1; k < b; ++k) {
    if (r.beta[static_cast<std::size_t>(k - 1)] != Rational(k) / b * g1 + g0 - g1) {
      r.reason = "beta_" + std::to_string(k) + " breaks beta_k = (k/b) gamma_1 + gamma_0 - gamma_1";
      return r;
    }
  }

  std::optional<FamilySpec> family;
  if (delta == 0) {
    family = FamilySpec::bucket_recursive(b);
  } else if (delta < 0) {
    const Rational D = g0 / -delta;
    if (!is_integer(D)) {
      r.reason = "gamma_0 / (gamma_0 - gamma_1) = " + to_string(D) + " is not an integer";
      return r;
    }
    if (D == 1) throw InvalidArgument("degenerate chain family (D = 1)");
    family = FamilySpec::bd_ary(b, 1 + (D - 1) / b);
  } else {
    const Rational alpha = (g0 + delta) / (b * delta) - 1;
    if (alpha <= 0) {
      r.reason = "recovered alpha = " + to_string(alpha) + " is not positive";
      return r;
    }
    family = FamilySpec::b_alpha_port(b, alpha);
  }

  const WeightModel canonical = weights_of(*family);
  const Rational s = (m.phi_at(1) / m.phi_at(0)) / (canonical.phi_at(1) / canonical.phi_at(0));
  const Rational a = b >= 2 ? m.psi_at(1) * s / canonical.psi_at(1)
                            : m.phi_at(0) * s / canonical.phi_at(0);
  const WeightModel rescaled = canonical.scaled(a, s);
  for (int k = 1; k < b; ++k) {
    if (rescaled.psi_at(k) != m.psi_at(k)) {
      r.reason = "psi_" + std::to_string(k) + " does not match the rescaled " + family->describe();
      return r;
    }
  }
  for (int k = 0; k <= n_probe; ++k) {
    if (rescaled.phi_at(k) != m.phi_at(k)) {
      r.reason = "phi_" + std::to_string(k) + " does not match the rescaled " + family->describe();
      return r;
    }
  }
  r.grown = true;
  r.family = family;
  r.a = a;
  r.s = s;
  r.reason = "matches " + family->describe() + " scaled by a=" + to_string(a) + ", s=" + to_string(s);
  return r;
}

DistributionCheck check_distribution_equivalence(const FamilySpec& spec, int n, int max_size) {
  DistributionCheck r;
  r.n = n;
  r.j = n;
  const WeightModel m = weights_of(spec);
  const TreeDistribution dist = exact_distribution(spec, n, max_size);
  const Rational total = total_weight(m, n, std::max(max_size, n));
  for (const auto& [key, p] : dist.probabilities) {
    ++r.trees_compared;
    if (p != tree_weight(canonical_decode(key), m) / total) {
      r.first_mismatch = key;
      r.message = "probability differs from w(T)/T_n";
      return r;
    }
  }
  Integer positive_trees = 0;
  for (const BucketTree& shape : enumerate_shapes(spec.bucket_size(), n, std::max(max_size, n))) {
    if (tree_weight(shape, m) > 0) positive_trees += count_labellings(shape);
  }
  if (positive_trees != static_cast<unsigned long>(dist.probabilities.size())) {
    r.message = "support has " + std::to_string(dist.probabilities.size()) + " trees, expected " +
                to_string(positive_trees);
    return r;
  }
  if (dist.total() != 1) {
    r.message = "probabilities sum to " + to_string(dist.total());
    return r;
  }
  r.pass = true;
  return r;
}

DistributionCheck check_preservation(const FamilySpec& spec, int n, int max_size) {
  DistributionCheck r;
  r.n = n;
  const auto laws = exact_distributions(spec, n, max_size);
  const TreeDistribution& top = laws.back();
  for (int j = 1; j <= n; ++j) {
    r.j = j;
    const TreeDistribution pushed = pushforward_strip(top, j);
    const auto& expected = laws[static_cast<std::size_t>(j - 1)].probabilities;
    r.trees_compared += expected.size();
    if (pushed.probabilities != expected) {
      for (const auto& [key, p] : expected) {
        auto it = pushed.probabilities.find(key);
        if (it == pushed.probabilities.end() || it->second != p) {
          r.first_mismatch = key;
          break;
        }
      }
      if (!r.first_mismatch) r.first_mismatch = pushed.probabilities.begin()->first;
      r.message = "stripped law differs at j = " + std::to_string(j);
      return r;
    }
  }
  r.pass = true;
  return r;
}

}  // namespace bucketree
