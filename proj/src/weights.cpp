#include "bucketree/weights.hpp"

#include <sstream>

#include "bucketree/error.hpp"

namespace bucketree {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

}  // namespace

// ---------------------------------------------------------------- FamilySpec

FamilySpec FamilySpec::bucket_recursive(int b) {
  require(b >= 1, "bucket size b must be at least 1");
  return FamilySpec(BucketRecursive{b});
}

FamilySpec FamilySpec::bd_ary(int b, Rational d) {
  require(b >= 1, "bucket size b must be at least 1");
  require(d > 1, "(b,d)-ary trees need d > 1");
  const Rational width = (d - 1) * b;
  require(is_integer(width) && width > 0, "(b,d)-ary trees need (d-1) b to be a positive integer");
  return FamilySpec(BdAry{b, std::move(d)});
}

FamilySpec FamilySpec::b_alpha_port(int b, Rational alpha) {
  require(b >= 1, "bucket size b must be at least 1");
  require(alpha > 0, "(b,alpha)-PORTs need alpha > 0");
  return FamilySpec(BAlphaPort{b, std::move(alpha)});
}

int FamilySpec::bucket_size() const {
  return std::visit([](const auto& f) { return f.b; }, v_);
}

Rational FamilySpec::parameter() const {
  if (const auto* f = std::get_if<BdAry>(&v_)) return f->d;
  if (const auto* f = std::get_if<BAlphaPort>(&v_)) return f->alpha;
  return 0;
}

Rational FamilySpec::sigma() const {
  if (const auto* f = std::get_if<BdAry>(&v_)) return f->d - 1;
  if (const auto* f = std::get_if<BAlphaPort>(&v_)) return f->alpha + 1;
  return 1;
}

Rational FamilySpec::kappa() const {
  if (const auto* f = std::get_if<BdAry>(&v_)) return Rational(1) / (f->d - 1);
  if (const auto* f = std::get_if<BAlphaPort>(&v_)) return Rational(-1) / (f->alpha + 1);
  return 0;
}

Rational FamilySpec::affine_c1() const { return sigma(); }

Rational FamilySpec::affine_c2() const {
  if (is_bd_ary()) return 1;
  if (is_b_alpha_port()) return -1;
  return 0;
}

Rational FamilySpec::connectivity(int n) const { return affine_c1() * n + affine_c2(); }

std::string FamilySpec::family_name() const {
  if (is_bd_ary()) return "bdary";
  if (is_b_alpha_port()) return "balpha";
  return "bucket-recursive";
}

std::string FamilySpec::describe() const {
  std::string s = family_name() + "(b=" + std::to_string(bucket_size());
  if (is_bd_ary()) s += ",d=" + to_string(parameter());
  if (is_b_alpha_port()) s += ",alpha=" + to_string(parameter());
  return s + ")";
}

bool operator==(const FamilySpec& a, const FamilySpec& b) {
  return a.family_name() == b.family_name() && a.bucket_size() == b.bucket_size() &&
         a.parameter() == b.parameter();
}

// ------------------------------------------------------------- DegreeWeights

DegreeWeights DegreeWeights::explicit_list(std::vector<Rational> values) {
  DegreeWeights w;
  w.kind_ = Kind::kExplicit;
  w.values_ = std::move(values);
  return w;
}

DegreeWeights DegreeWeights::exponential(Rational scale, Rational x) {
  require(scale > 0 && x > 0, "exp rule needs positive scale and rate");
  DegreeWeights w;
  w.kind_ = Kind::kExp;
  w.scale_ = std::move(scale);
  w.x_ = std::move(x);
  return w;
}

DegreeWeights DegreeWeights::binomial(Rational scale, Rational x, int exponent) {
  require(scale > 0 && x > 0, "binom rule needs positive scale and rate");
  require(exponent >= 0, "binom rule needs a non-negative integer exponent");
  DegreeWeights w;
  w.kind_ = Kind::kBinom;
  w.scale_ = std::move(scale);
  w.x_ = std::move(x);
  w.param_ = exponent;
  return w;
}

DegreeWeights DegreeWeights::negative_binomial(Rational scale, Rational x, Rational r) {
  require(scale > 0 && x > 0, "negbinom rule needs positive scale and rate");
  require(r > 0, "negbinom rule needs a positive exponent");
  DegreeWeights w;
  w.kind_ = Kind::kNegBinom;
  w.scale_ = std::move(scale);
  w.x_ = std::move(x);
  w.param_ = std::move(r);
  return w;
}

Rational DegreeWeights::operator[](int k) const {
  if (k < 0) return 0;
  switch (kind_) {
    case Kind::kExplicit:
      return static_cast<std::size_t>(k) < values_.size() ? values_[static_cast<std::size_t>(k)]
                                                          : Rational(0);
    case Kind::kExp:
      return scale_ * power(x_, k) / Rational(factorial(k));
    case Kind::kBinom:
      return scale_ * bucketree::binomial(param_, k) * power(x_, k);
    case Kind::kNegBinom:
      return scale_ * bucketree::binomial(param_ + k - 1, k) * power(x_, k);
  }
  return 0;
}

std::optional<int> DegreeWeights::support_bound() const {
  switch (kind_) {
    case Kind::kExplicit: {
      int last = -1;
      for (std::size_t k = 0; k < values_.size(); ++k) {
        if (values_[k] != 0) last = static_cast<int>(k);
      }
      return last;
    }
    case Kind::kBinom:
      return static_cast<int>(param_.get_num().get_si());
    default:
      return std::nullopt;
  }
}

DegreeWeights DegreeWeights::scaled(const Rational& factor, const Rational& x_factor) const {
  DegreeWeights w = *this;
  if (kind_ == Kind::kExplicit) {
    Rational xk = 1;
    for (auto& v : w.values_) {
      v *= factor * xk;
      xk *= x_factor;
    }
  } else {
    w.scale_ *= factor;
    w.x_ *= x_factor;
  }
  return w;
}

std::string DegreeWeights::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::kExplicit:
      os << '[';
      for (std::size_t k = 0; k < values_.size(); ++k) os << (k ? "," : "") << to_string(values_[k]);
      os << ']';
      break;
    case Kind::kExp:
      os << to_string(scale_) << "*exp(" << to_string(x_) << "*t)";
      break;
    case Kind::kBinom:
      os << to_string(scale_) << "*(1+" << to_string(x_) << "*t)^" << to_string(param_);
      break;
    case Kind::kNegBinom:
      os << to_string(scale_) << "*(1-" << to_string(x_) << "*t)^(-" << to_string(param_) << ")";
      break;
  }
  return os.str();
}

// --------------------------------------------------------------- WeightModel

WeightModel::WeightModel(int b, std::vector<Rational> psi, DegreeWeights phi)
    : b_(b), psi_(std::move(psi)), phi_(std::move(phi)) {
  require(b_ >= 1, "bucket size b must be at least 1");
  require(static_cast<int>(psi_.size()) == b_ - 1,
          "expected " + std::to_string(b_ - 1) + " bucket weights psi_1..psi_{b-1}, got " +
              std::to_string(psi_.size()));
  for (const auto& p : psi_) require(p >= 0, "bucket weights must be non-negative");
  require(phi_[0] > 0, "phi_0 must be positive");
  if (phi_.kind() == DegreeWeights::Kind::kExplicit) {
    bool nondegenerate = false;
    const auto& values = phi_.explicit_values();
    for (std::size_t k = 0; k < values.size(); ++k) {
      require(values[k] >= 0, "degree weights must be non-negative");
      if (k >= 2 && values[k] > 0) nondegenerate = true;
    }
    require(nondegenerate, "non-degeneracy requires some phi_k > 0 with k >= 2");
  } else if (phi_.kind() == DegreeWeights::Kind::kBinom) {
    require(*phi_.support_bound() >= 2, "non-degeneracy requires some phi_k > 0 with k >= 2");
  }
}

Rational WeightModel::psi_at(int k) const {
  if (k == b_) return phi_[0];
  if (k < 1 || k > b_) throw InvalidArgument("psi index out of range");
  return psi_[static_cast<std::size_t>(k - 1)];
}

WeightModel WeightModel::scaled(const Rational& a, const Rational& s) const {
  require(a > 0 && s > 0, "scaling parameters must be positive");
  std::vector<Rational> psi = psi_;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    psi[i] *= power(a, static_cast<int>(i) + 1) / s;
  }
  return WeightModel(b_, std::move(psi), phi_.scaled(power(a, b_) / s, s));
}

std::string WeightModel::describe() const {
  std::string out = "b=" + std::to_string(b_) + " psi=[";
  for (std::size_t i = 0; i < psi_.size(); ++i) out += (i ? "," : "") + to_string(psi_[i]);
  return out + "] phi=" + phi_.describe();
}

// ---------------------------------------------------------------- weights_of

WeightModel weights_of(const FamilySpec& spec) {
  const int b = spec.bucket_size();
  std::vector<Rational> psi;
  psi.reserve(static_cast<std::size_t>(b - 1));
  if (spec.is_bucket_recursive()) {
    for (int k = 1; k < b; ++k) psi.emplace_back(factorial(k - 1));
    return WeightModel(b, std::move(psi),
                       DegreeWeights::exponential(Rational(factorial(b - 1)), Rational(b)));
  }
  if (spec.is_bd_ary()) {
    const Rational dm1 = spec.parameter() - 1;
    auto bucket = [&](int k) -> Rational {
      return Rational(factorial(k - 1)) * power(dm1, k - 1) * binomial(k - 1 + 1 / dm1, k - 1);
    };
    for (int k = 1; k < b; ++k) psi.push_back(bucket(k));
    const Rational D = dm1 * b + 1;
    return WeightModel(b, std::move(psi),
                       DegreeWeights::binomial(bucket(b), 1, static_cast<int>(D.get_num().get_si())));
  }
  const Rational ap1 = spec.parameter() + 1;
  auto bucket = [&](int k) -> Rational {
    return Rational(factorial(k - 1)) * power(ap1, k - 1) * binomial(k - 1 - 1 / ap1, k - 1);
  };
  for (int k = 1; k < b; ++k) psi.push_back(bucket(k));
  return WeightModel(b, std::move(psi),
                     DegreeWeights::negative_binomial(bucket(b), 1, ap1 * b - 1));
}

// ----------------------------------------------------------- weights, counts

Rational tree_weight(const BucketTree& t, const WeightModel& m) {
  if (t.bucket_size() != m.bucket_size()) {
    throw InvalidArgument("tree bucket size " + std::to_string(t.bucket_size()) +
                          " does not match weight model bucket size " +
                          std::to_string(m.bucket_size()));
  }
  Rational w = 1;
  const int b = m.bucket_size();
  for (const BucketNode* v : t.preorder()) {
    w *= v->capacity == b ? m.phi_at(v->degree()) : m.psi_at(v->capacity);
    if (w == 0) break;
  }
  return w;
}

namespace {

int hook_product(const BucketNode& v, Integer& denominator) {
  int subtree = v.capacity;
  for (const auto& c : v.children) subtree += hook_product(c, denominator);
  for (int i = 0; i < v.capacity; ++i) denominator *= subtree - i;
  return subtree;
}

}  // namespace

Integer count_labellings(const BucketTree& t) {
  Integer denominator = 1;
  const int n = hook_product(t.root(), denominator);
  return factorial(n) / denominator;
}

}  // namespace bucketree
