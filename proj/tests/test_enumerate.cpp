#include <doctest.h>

#include <set>

#include "bucketree/enumerate.hpp"
#include "bucketree/error.hpp"
#include "builders.hpp"
#include "oracles.hpp"

using namespace bucketree;
using build::S;

namespace {

std::vector<FamilySpec> family_grid() {
  std::vector<FamilySpec> out;
  for (int b = 1; b <= 3; ++b) {
    out.push_back(FamilySpec::bucket_recursive(b));
    for (const Rational& d : {Rational(2), Rational(3, 2), Rational(3)}) {
      const Rational width = (d - 1) * b;
      if (is_integer(width) && width > 0) out.push_back(FamilySpec::bd_ary(b, d));
    }
    for (const Rational& a : {Rational(1), Rational(1, 2), Rational(2)}) {
      out.push_back(FamilySpec::b_alpha_port(b, a));
    }
  }
  return out;
}

WeightModel bucket_ordered() {
  return WeightModel(2, {1}, DegreeWeights::negative_binomial(1, 1, 1));
}

Integer catalan(int k) { return factorial(2 * k) / (factorial(k) * factorial(k + 1)); }

}  // namespace

TEST_CASE("shape enumeration examples") {
  CHECK(enumerate_shapes(2, 1).size() == 1);
  CHECK(enumerate_shapes(2, 1)[0] == BucketTree(2, S(1)));
  const auto three = enumerate_shapes(2, 3);
  REQUIRE(three.size() == 1);
  CHECK(three[0] == BucketTree(2, S(2, {S(1)})));
  const auto four = enumerate_shapes(2, 4);
  REQUIRE(four.size() == 2);
  std::set<std::string> got;
  for (const auto& s : four) got.insert(canonical_encode(s));
  CHECK(got.count(canonical_encode(BucketTree(2, S(2, {S(2)})))) == 1);
  CHECK(got.count(canonical_encode(BucketTree(2, S(2, {S(1), S(1)})))) == 1);
}

TEST_CASE("shapes are saturated inside, sized right and distinct") {
  for (int b = 1; b <= 3; ++b) {
    for (int n = 1; n <= 9; ++n) {
      std::set<std::string> seen;
      for (const auto& s : enumerate_shapes(b, n)) {
        CHECK(s.size() == n);
        CHECK_FALSE(s.labelled());
        for (const BucketNode* v : s.preorder()) {
          if (!v->is_leaf()) CHECK(v->capacity == b);
        }
        CHECK(seen.insert(canonical_encode(s)).second);
      }
    }
  }
}

TEST_CASE("unary buckets give ordered trees counted by Catalan numbers") {
  for (int n = 1; n <= 10; ++n) {
    CHECK(enumerate_shapes(1, n).size() == catalan(n - 1));
  }
}

TEST_CASE("enumeration guard") {
  CHECK_THROWS_AS(enumerate_shapes(2, 13), ResourceLimit);
  CHECK_NOTHROW(enumerate_shapes(1, 13, 13));
  CHECK_THROWS_AS(enumerate_shapes(0, 3), InvalidArgument);
  CHECK_THROWS_AS(enumerate_shapes(2, 0), InvalidArgument);
}

TEST_CASE("bucket ordered totals") {
  const auto t = total_weights(bucket_ordered(), 6);
  const std::vector<Rational> expected{0, 1, 1, 1, 3, 13, 77};
  CHECK(t == expected);
}

TEST_CASE("total weight examples") {
  CHECK(total_weight(weights_of(FamilySpec::bucket_recursive(2)), 4) == 6);
  CHECK(total_weight(weights_of(FamilySpec::b_alpha_port(1, 1)), 4) == 15);
}

TEST_CASE("totals agree with a sum over every insertion history") {
  for (const auto& spec : family_grid()) {
    const WeightModel m = weights_of(spec);
    std::vector<Rational> psi(m.psi());
    auto phi = [&](int k) { return m.phi_at(k); };
    const int n_max = spec.bucket_size() == 1 ? 6 : 7;
    const auto totals = total_weights(m, n_max);
    for (int n = 1; n <= n_max; ++n) {
      CHECK_MESSAGE(totals[static_cast<std::size_t>(n)] ==
                        oracle::total_weight(spec.bucket_size(), psi, phi, n),
                    spec.describe() << " n=" << n);
    }
  }
}

TEST_CASE("closed forms") {
  CHECK(closed_form_Tn(FamilySpec::bucket_recursive(2), 5) == 24);
  CHECK(closed_form_Tn(FamilySpec::bd_ary(2, Rational(3, 2)), 3) == 3);
  CHECK(closed_form_Tn(FamilySpec::bd_ary(1, 2), 4) == 24);
  CHECK(closed_form_Tn(FamilySpec::b_alpha_port(1, 1), 5) == 105);
  for (const auto& spec : family_grid()) {
    const auto totals = total_weights(weights_of(spec), 8);
    for (int n = 1; n <= 8; ++n) {
      CHECK_MESSAGE(totals[static_cast<std::size_t>(n)] == closed_form_Tn(spec, n),
                    spec.describe() << " n=" << n);
    }
  }
}

TEST_CASE("series helpers") {
  const Series a{0, 1, 1};
  const Series sq = series_multiply(a, a, 4);
  CHECK(sq == Series{0, 0, 1, 2, 1});
  CHECK(series_multiply(a, a, 2) == Series{0, 0, 1});
  // 1/(1-x) composed with x + x^2 = 1 + x + 2x^2 + 3x^3 + ...
  const Series c = compose(DegreeWeights::negative_binomial(1, 1, 1), a, 4);
  CHECK(c == Series{1, 1, 2, 3, 5});
  CHECK_THROWS_AS(compose(DegreeWeights::negative_binomial(1, 1, 1), Series{1, 1}, 3),
                  InvalidArgument);
  const std::vector<Rational> totals{0, 1, 1, 1, 3};
  CHECK(egf_coefficients(totals) == Series{0, 1, Rational(1, 2), Rational(1, 6), Rational(1, 8)});
}

TEST_CASE("differential equation recurrence") {
  const OdeReport bo = check_ode_recurrence(bucket_ordered(), 6);
  CHECK(bo.pass);
  CHECK(bo.checked == 6);  // T_1 = psi_1 plus n = 0..4
  for (const auto& spec : family_grid()) {
    const OdeReport r = check_ode_recurrence(weights_of(spec), 8);
    CHECK_MESSAGE(r.pass, spec.describe() << ": " << r.message);
  }
}

TEST_CASE("differential equation recurrence catches perturbed totals") {
  const WeightModel m = weights_of(FamilySpec::bucket_recursive(2));
  auto totals = total_weights(m, 6);
  CHECK(check_ode_recurrence(m, totals).pass);
  totals[3] += 1;
  const OdeReport r = check_ode_recurrence(m, totals);
  CHECK_FALSE(r.pass);
  REQUIRE(r.first_failing_n);
  CHECK(*r.first_failing_n == 1);

  auto initial = total_weights(m, 6);
  initial[1] += 1;
  const OdeReport r2 = check_ode_recurrence(m, initial);
  CHECK_FALSE(r2.pass);
  REQUIRE(r2.failing_initial_k);
  CHECK(*r2.failing_initial_k == 1);
}

TEST_CASE("bucket ordered fifth total from the series") {
  const Series t{0, 1, Rational(1, 2), Rational(1, 6), Rational(1, 8)};
  const Series c = compose(DegreeWeights::negative_binomial(1, 1, 1), t, 3);
  CHECK(Rational(factorial(3)) * c[3] == 13);
}
