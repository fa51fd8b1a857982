#include "bucketree/enumerate.hpp"

#include <map>

#include "bucketree/error.hpp"

namespace bucketree {

Series series_multiply(const Series& a, const Series& b, int order) {
  Series out(static_cast<std::size_t>(order) + 1, Rational(0));
  for (std::size_t i = 0; i < a.size() && static_cast<int>(i) <= order; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size() && static_cast<int>(i + j) <= order; ++j) {
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

Series compose(const DegreeWeights& phi, const Series& inner, int order) {
  if (!inner.empty() && inner[0] != 0) {
    throw InvalidArgument("compose needs an inner series without constant term");
  }
  int top = order;
  if (auto bound = phi.support_bound()) top = std::min(top, *bound);
  Series acc{phi[top]};
  for (int k = top - 1; k >= 0; --k) {
    acc = series_multiply(acc, inner, order);
    acc[0] += phi[k];
  }
  acc.resize(static_cast<std::size_t>(order) + 1, Rational(0));
  return acc;
}

namespace {

class ShapeEnumerator {
 public:
  explicit ShapeEnumerator(int b) : b_(b) {}

  const std::vector<BucketNode>& trees(int n) {
    if (auto it = trees_.find(n); it != trees_.end()) return it->second;
    std::vector<BucketNode> out;
    if (n < b_) {
      out.push_back(BucketNode{{}, n, {}});
    } else {
      for (const auto& forest : forests(n - b_)) out.push_back(BucketNode{{}, b_, forest});
    }
    return trees_.emplace(n, std::move(out)).first->second;
  }

  // Ordered sequences of trees with total size m.
  const std::vector<std::vector<BucketNode>>& forests(int m) {
    if (auto it = forests_.find(m); it != forests_.end()) return it->second;
    std::vector<std::vector<BucketNode>> out;
    if (m == 0) {
      out.emplace_back();
    } else {
      for (int first = 1; first <= m; ++first) {
        const auto& heads = trees(first);
        const auto& tails = forests(m - first);
        for (const auto& head : heads) {
          for (const auto& tail : tails) {
            std::vector<BucketNode> f;
            f.reserve(tail.size() + 1);
            f.push_back(head);
            f.insert(f.end(), tail.begin(), tail.end());
            out.push_back(std::move(f));
          }
        }
      }
    }
    return forests_.emplace(m, std::move(out)).first->second;
  }

 private:
  int b_;
  std::map<int, std::vector<BucketNode>> trees_;
  std::map<int, std::vector<std::vector<BucketNode>>> forests_;
};

}  // namespace

std::vector<BucketTree> enumerate_shapes(int b, int n, int max_size) {
  if (b < 1) throw InvalidArgument("bucket size b must be at least 1");
  if (n < 1) throw InvalidArgument("tree size n must be at least 1");
  if (n > max_size) {
    throw ResourceLimit("refusing to enumerate shapes of size " + std::to_string(n) +
                        " (limit " + std::to_string(max_size) + ")");
  }
  ShapeEnumerator e(b);
  std::vector<BucketTree> out;
  for (const auto& node : e.trees(n)) out.emplace_back(b, node);
  return out;
}

Rational total_weight(const WeightModel& m, int n, int max_size) {
  Rational total = 0;
  for (const auto& shape : enumerate_shapes(m.bucket_size(), n, max_size)) {
    const Rational w = tree_weight(shape, m);
    if (w != 0) total += w * Rational(count_labellings(shape));
  }
  return total;
}

std::vector<Rational> total_weights(const WeightModel& m, int n_max, int max_size) {
  std::vector<Rational> out(static_cast<std::size_t>(n_max) + 1, Rational(0));
  for (int n = 1; n <= n_max; ++n) out[static_cast<std::size_t>(n)] = total_weight(m, n, max_size);
  return out;
}

Rational closed_form_Tn(const FamilySpec& spec, int n) {
  if (n < 1) throw InvalidArgument("tree size n must be at least 1");
  const Rational lead(factorial(n - 1));
  if (spec.is_bd_ary()) {
    const Rational dm1 = spec.parameter() - 1;
    return lead * power(dm1, n - 1) * binomial(n - 1 + 1 / dm1, n - 1);
  }
  if (spec.is_b_alpha_port()) {
    const Rational ap1 = spec.parameter() + 1;
    return lead * power(ap1, n - 1) * binomial(n - 1 - 1 / ap1, n - 1);
  }
  return lead;
}

Series egf_coefficients(std::span<const Rational> totals) {
  Series s(totals.size(), Rational(0));
  for (std::size_t n = 1; n < totals.size(); ++n) {
    s[n] = totals[n] / Rational(factorial(static_cast<int>(n)));
  }
  return s;
}

OdeReport check_ode_recurrence(const WeightModel& m, int N) {
  return check_ode_recurrence(m, total_weights(m, N));
}

OdeReport check_ode_recurrence(const WeightModel& m, std::span<const Rational> totals) {
  OdeReport r;
  const int b = m.bucket_size();
  const int N = static_cast<int>(totals.size()) - 1;
  if (N < b) throw InvalidArgument("ODE check needs T_1..T_N with N >= b");
  for (int k = 1; k < b; ++k) {
    ++r.checked;
    if (totals[static_cast<std::size_t>(k)] != m.psi_at(k)) {
      r.pass = false;
      r.failing_initial_k = k;
      r.message = "initial condition T_" + std::to_string(k) + " = " +
                  to_string(totals[static_cast<std::size_t>(k)]) + " differs from psi_" +
                  std::to_string(k) + " = " + to_string(m.psi_at(k));
      return r;
    }
  }
  const int order = N - b;
  const Series rhs = compose(m.phi(), egf_coefficients(totals), order);
  for (int n = 0; n <= order; ++n) {
    ++r.checked;
    const Rational expected = Rational(factorial(n)) * rhs[static_cast<std::size_t>(n)];
    const Rational& actual = totals[static_cast<std::size_t>(n + b)];
    if (actual != expected) {
      r.pass = false;
      r.first_failing_n = n;
      r.message = "T_" + std::to_string(n + b) + " = " + to_string(actual) + " but " +
                  std::to_string(n) + "! [z^" + std::to_string(n) + "] phi(T(z)) = " +
                  to_string(expected);
      return r;
    }
  }
  r.message = "all " + std::to_string(r.checked) + " coefficient identities hold";
  return r;
}

}  // namespace bucketree
