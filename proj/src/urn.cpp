#include "bucketree/urn.hpp"

#include <limits>
#include <vector>

#include "bucketree/error.hpp"

namespace bucketree {

UrnState urn_from(const FamilySpec& spec, int j, int K) {
  if (j < 1 || K < 1 || K > j || K > spec.bucket_size()) {
    throw InvalidArgument("urn_from needs 1 <= K <= min(j, b)");
  }
  const Rational sigma = spec.sigma();
  if (spec.is_bucket_recursive()) return UrnState{Rational(K), Rational(j - K), sigma};
  if (spec.is_bd_ary()) return UrnState{sigma * K + 1, sigma * (j - K), sigma};
  return UrnState{sigma * K - 1, sigma * (j - K), sigma};
}

namespace {

std::uint64_t to_u64(const Integer& z) {
  if (z < 0 || !z.fits_ulong_p()) throw ResourceLimit("urn mass does not fit in 64 bits");
  return z.get_ui();
}

}  // namespace

UrnProcess::UrnProcess(const UrnState& u) {
  if (u.white < 0 || u.black < 0 || u.sigma <= 0 || u.total() <= 0) {
    throw InvalidArgument("urn needs non-negative masses, positive total and sigma > 0");
  }
  Integer l;
  mpz_lcm(l.get_mpz_t(), u.white.get_den_mpz_t(), u.black.get_den_mpz_t());
  mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), u.sigma.get_den_mpz_t());
  scale_ = to_u64(l);
  white_ = to_u64(Rational(u.white * l).get_num());
  black_ = to_u64(Rational(u.black * l).get_num());
  sigma_ = to_u64(Rational(u.sigma * l).get_num());
}

void UrnProcess::step(CounterRng& rng) {
  const std::uint64_t total = white_ + black_;
  if (total > std::numeric_limits<std::uint64_t>::max() / 2 - sigma_) {
    throw ResourceLimit("urn total overflows 64-bit scaled arithmetic");
  }
  if (rng.uniform_below(total) < white_) {
    white_ += sigma_;
  } else {
    black_ += sigma_;
  }
  ++draws_;
}

void UrnProcess::run(std::int64_t draws, CounterRng& rng) {
  for (std::int64_t i = 0; i < draws; ++i) step(rng);
}

Rational UrnProcess::white() const {
  Rational w(Integer(static_cast<unsigned long>(white_)), Integer(static_cast<unsigned long>(scale_)));
  w.canonicalize();
  return w;
}

Rational UrnProcess::black() const {
  Rational b(Integer(static_cast<unsigned long>(black_)), Integer(static_cast<unsigned long>(scale_)));
  b.canonicalize();
  return b;
}

Rational urn_run(const UrnState& u, int N, CounterRng& rng) {
  if (N < 0) throw InvalidArgument("urn_run needs N >= 0");
  UrnProcess p(u);
  p.run(N, rng);
  return p.white();
}

std::map<Rational, Rational> urn_distribution_exact(const UrnState& u, int N, int max_draws) {
  if (N < 0) throw InvalidArgument("urn_distribution_exact needs N >= 0");
  if (N > max_draws) {
    throw ResourceLimit("refusing exact urn law for " + std::to_string(N) + " draws (limit " +
                        std::to_string(max_draws) + ")");
  }
  if (u.white < 0 || u.black < 0 || u.sigma <= 0 || u.total() <= 0) {
    throw InvalidArgument("urn needs non-negative masses, positive total and sigma > 0");
  }
  // prob[i]: probability of exactly i white draws so far.
  std::vector<Rational> prob{Rational(1)};
  for (int t = 0; t < N; ++t) {
    const Rational total = u.total() + u.sigma * t;
    std::vector<Rational> next(prob.size() + 1, Rational(0));
    for (std::size_t i = 0; i < prob.size(); ++i) {
      if (prob[i] == 0) continue;
      const Rational white = u.white + u.sigma * static_cast<long>(i);
      const Rational p_white = white / total;
      next[i + 1] += prob[i] * p_white;
      next[i] += prob[i] * (1 - p_white);
    }
    prob = std::move(next);
  }
  std::map<Rational, Rational> law;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    if (prob[i] != 0) law[u.white + u.sigma * static_cast<long>(i)] += prob[i];
  }
  return law;
}

Rational urn_moment_exact(const UrnState& u, int N, int s) {
  if (s < 1 || N < 0) throw InvalidArgument("urn_moment_exact needs s >= 1 and N >= 0");
  const Rational t0 = u.total();
  auto total_at = [&](int i) -> Rational { return u.sigma * i + t0; };
  Rational ratio = 1;
  for (int i = 0; i < s; ++i) ratio *= total_at(N + i) / total_at(i);
  return binomial(u.white / u.sigma + s - 1, s) * ratio;
}

Rational binomial_moment(const std::map<Rational, Rational>& law, const Rational& sigma, int s) {
  Rational m = 0;
  for (const auto& [w, p] : law) m += p * binomial(w / sigma + s - 1, s);
  return m;
}

Rational descendants_from_white(const FamilySpec& spec, const Rational& white, int K) {
  const Rational sigma = spec.sigma();
  if (spec.is_bucket_recursive()) return white - K + 1;
  if (spec.is_bd_ary()) return (white - 1) / sigma - K + 1;
  return (white + 1) / sigma - K + 1;
}

namespace {

int count_at_least(const BucketNode& v, int j) {
  int c = 0;
  for (int l : v.labels) c += l >= j ? 1 : 0;
  for (const auto& ch : v.children) c += count_at_least(ch, j);
  return c;
}

const BucketNode* holder_of(const BucketNode& v, int j) {
  for (int l : v.labels) {
    if (l == j) return &v;
  }
  for (const auto& ch : v.children) {
    if (const auto* hit = holder_of(ch, j)) return hit;
  }
  return nullptr;
}

const BucketNode& require_holder(const BucketTree& t, int j) {
  if (!t.labelled() || j < 1 || j > t.size()) {
    throw InvalidArgument("label " + std::to_string(j) + " is not in the tree");
  }
  return *holder_of(t.root(), j);
}

int to_int(const Rational& q) {
  if (!is_integer(q)) throw InvalidArgument("shift map produced a non-integer " + to_string(q));
  return static_cast<int>(q.get_num().get_si());
}

}  // namespace

int descendants_of(const BucketTree& t, int j) { return count_at_least(require_holder(t, j), j); }

int initial_bucket_size(const BucketTree& t, int j) {
  const BucketNode& v = require_holder(t, j);
  int k = 0;
  for (int l : v.labels) k += l <= j ? 1 : 0;
  return k;
}

DescendantSample descendants_via_urn(const FamilySpec& spec, int n, int j, CounterRng& rng) {
  if (j < 1 || j > n) throw InvalidArgument("descendants need 1 <= j <= n");
  const BucketTree prefix = sample_tree(spec, j, rng);
  DescendantSample out{n, j, initial_bucket_size(prefix, j), 0};
  const Rational white = urn_run(urn_from(spec, j, out.K), n - j, rng);
  out.Y = to_int(descendants_from_white(spec, white, out.K));
  return out;
}

DescendantSample descendants_direct(const FamilySpec& spec, int n, int j, CounterRng& rng) {
  if (j < 1 || j > n) throw InvalidArgument("descendants need 1 <= j <= n");
  const BucketTree t = sample_tree(spec, n, rng);
  return DescendantSample{n, j, initial_bucket_size(t, j), descendants_of(t, j)};
}

std::map<int, Rational> initial_bucket_law(const FamilySpec& spec, int j, int max_size) {
  std::map<int, Rational> law;
  for (const auto& [key, p] : exact_distribution(spec, j, max_size).probabilities) {
    law[initial_bucket_size(canonical_decode(key), j)] += p;
  }
  return law;
}

std::map<int, Rational> descendants_law_from_trees(const FamilySpec& spec, int n, int j,
                                                   int max_size) {
  if (j < 1 || j > n) throw InvalidArgument("descendants need 1 <= j <= n");
  std::map<int, Rational> law;
  for (const auto& [key, p] : exact_distribution(spec, n, max_size).probabilities) {
    law[descendants_of(canonical_decode(key), j)] += p;
  }
  return law;
}

std::map<int, Rational> descendants_law_from_urn(const FamilySpec& spec, int n, int j,
                                                 int max_size) {
  if (j < 1 || j > n) throw InvalidArgument("descendants need 1 <= j <= n");
  std::map<int, Rational> law;
  for (const auto& [K, pk] : initial_bucket_law(spec, j, max_size)) {
    for (const auto& [w, pw] : urn_distribution_exact(urn_from(spec, j, K), n - j)) {
      law[to_int(descendants_from_white(spec, w, K))] += pk * pw;
    }
  }
  return law;
}

}  // namespace bucketree
