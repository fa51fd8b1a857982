#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bucketree/rational.hpp"
#include "bucketree/tree.hpp"

namespace bucketree {

// The three grown families. Parameters are exact rationals.
struct BucketRecursive {
  int b;
};
struct BdAry {
  int b;
  Rational d;  // (d-1) b must be a positive integer
};
struct BAlphaPort {
  int b;
  Rational alpha;  // alpha > 0
};

class FamilySpec {
 public:
  using Variant = std::variant<BucketRecursive, BdAry, BAlphaPort>;

  // Throws InvalidArgument on parameter constraint violations.
  static FamilySpec bucket_recursive(int b);
  static FamilySpec bd_ary(int b, Rational d);
  static FamilySpec b_alpha_port(int b, Rational alpha);

  const Variant& variant() const { return v_; }
  int bucket_size() const;

  bool is_bucket_recursive() const { return std::holds_alternative<BucketRecursive>(v_); }
  bool is_bd_ary() const { return std::holds_alternative<BdAry>(v_); }
  bool is_b_alpha_port() const { return std::holds_alternative<BAlphaPort>(v_); }

  // d for (b,d)-ary trees, alpha for (b,alpha)-PORTs, 0 otherwise.
  Rational parameter() const;

  // Urn increment: 1, d-1, alpha+1.
  Rational sigma() const;
  // Beta shift: 0, 1/(d-1), -1/(alpha+1).
  Rational kappa() const;
  // T_{n+1} / T_n = c1 n + c2.
  Rational affine_c1() const;
  Rational affine_c2() const;
  // Total connectivity q_n: n, (d-1)n+1, (alpha+1)n-1.
  Rational connectivity(int n) const;

  // "bucket-recursive", "bdary", "balpha".
  std::string family_name() const;
  // e.g. "bdary(b=2,d=3/2)".
  std::string describe() const;

  friend bool operator==(const FamilySpec& a, const FamilySpec& b);

 private:
  explicit FamilySpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

// Degree-weight sequence phi_k, either an explicit finite list (zero tail) or
// one of the closed-form rules
//   exp:       scale * exp(x t)          phi_k = scale x^k / k!
//   binom:     scale * (1 + x t)^D       phi_k = scale binom(D, k) x^k
//   negbinom:  scale * (1 - x t)^(-r)    phi_k = scale binom(r+k-1, k) x^k
class DegreeWeights {
 public:
  enum class Kind { kExplicit, kExp, kBinom, kNegBinom };

  static DegreeWeights explicit_list(std::vector<Rational> values);
  static DegreeWeights exponential(Rational scale, Rational x);
  static DegreeWeights binomial(Rational scale, Rational x, int exponent);
  static DegreeWeights negative_binomial(Rational scale, Rational x, Rational r);

  Kind kind() const { return kind_; }
  Rational operator[](int k) const;

  // Largest k with phi_k possibly nonzero; nullopt for infinite support.
  std::optional<int> support_bound() const;

  // phi_k -> factor * x_factor^k * phi_k.
  DegreeWeights scaled(const Rational& factor, const Rational& x_factor) const;

  // Display form, e.g. "[1,2,1]" or "1*exp(2*t)".
  std::string describe() const;

  const std::vector<Rational>& explicit_values() const { return values_; }

 private:
  DegreeWeights() = default;
  Kind kind_ = Kind::kExplicit;
  std::vector<Rational> values_;
  Rational scale_ = 1;
  Rational x_ = 1;
  Rational param_ = 0;
};

// Bucket weights psi_1..psi_{b-1} and degree weights phi_k.
class WeightModel {
 public:
  // Validates phi_0 > 0, non-negativity, and non-degeneracy (some k >= 2 with
  // phi_k > 0). Throws InvalidArgument.
  WeightModel(int b, std::vector<Rational> psi, DegreeWeights phi);

  int bucket_size() const { return b_; }
  const std::vector<Rational>& psi() const { return psi_; }
  const DegreeWeights& phi() const { return phi_; }

  Rational phi_at(int k) const { return phi_[k]; }
  // psi_k for 1 <= k <= b, with the convention psi_b := phi_0.
  Rational psi_at(int k) const;

  // Coupled rescaling phi_k -> a^b s^(k-1) phi_k, psi_k -> a^k s^-1 psi_k.
  WeightModel scaled(const Rational& a, const Rational& s) const;

  std::string describe() const;

 private:
  int b_;
  std::vector<Rational> psi_;
  DegreeWeights phi_;
};

WeightModel weights_of(const FamilySpec& spec);

// w(T) = prod_v w(v), w(v) = phi_deg(v) if saturated else psi_c(v).
Rational tree_weight(const BucketTree& t, const WeightModel& m);

// Number of increasing labellings L(T) of the tree's shape, computed as
// n! / prod_v s(v)(s(v)-1)...(s(v)-c(v)+1) with s(v) the subtree size.
Integer count_labellings(const BucketTree& t);

}  // namespace bucketree
