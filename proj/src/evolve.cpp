#include "bucketree/evolve.hpp"

#include <algorithm>

#include "bucketree/error.hpp"

namespace bucketree {

Rational TreeDistribution::total() const {
  Rational s = 0;
  for (const auto& [key, p] : probabilities) s += p;
  return s;
}

namespace {

std::int64_t to_i64(const Integer& z) {
  if (!z.fits_slong_p()) throw ResourceLimit("attachment weight does not fit in 64 bits");
  return z.get_si();
}

}  // namespace

AttachmentWeights attachment_weights(const BucketTree& t, const FamilySpec& spec) {
  const int b = t.bucket_size();
  if (b != spec.bucket_size()) throw InvalidArgument("tree and family disagree on bucket size");
  AttachmentWeights out;
  const auto nodes = t.preorder();
  out.weights.reserve(nodes.size());
  const std::int64_t n = t.size();
  if (spec.is_bucket_recursive()) {
    for (const BucketNode* v : nodes) out.weights.push_back(v->capacity);
    out.total = n;
  } else {
    const Rational sigma = spec.sigma();
    const std::int64_t p = to_i64(sigma.get_num());
    const std::int64_t q = to_i64(sigma.get_den());
    for (const BucketNode* v : nodes) {
      const std::int64_t c = v->capacity;
      const std::int64_t deg = v->degree();
      const std::int64_t w = spec.is_bd_ary() ? p * c + q - q * deg : q * deg + p * c - q;
      if (w < 0) throw InvalidArgument("tree is outside the support of " + spec.describe());
      out.weights.push_back(w);
    }
    out.total = spec.is_bd_ary() ? p * n + q : p * n - q;
  }
  return out;
}

Rational attachment_probability(const BucketTree& t, std::size_t v, const FamilySpec& spec) {
  const auto nodes = t.preorder();
  if (v >= nodes.size()) throw InvalidArgument("node index out of range");
  const BucketNode& node = *nodes[v];
  const int n = t.size();
  const Rational c = node.capacity;
  const Rational deg = node.degree();
  Rational p;
  if (spec.is_bucket_recursive()) {
    p = c / n;
  } else if (spec.is_bd_ary()) {
    const Rational dm1 = spec.parameter() - 1;
    p = (dm1 * c + 1 - deg) / (dm1 * n + 1);
  } else {
    const Rational ap1 = spec.parameter() + 1;
    p = (deg + ap1 * c - 1) / (ap1 * n - 1);
  }
  return p;
}

BucketTree apply_growth(const BucketTree& t, const GrowthEvent& e) {
  if (!t.labelled()) throw InvalidArgument("growth needs a labelled tree");
  const int label = t.size() + 1;
  const int b = t.bucket_size();
  BucketNode root = t.root();
  BucketNode& v = node_at(root, e.target);
  if (v.capacity < b) {
    if (e.slot) throw InvalidArgument("unsaturated buckets take no slot");
    v.labels.push_back(label);
    v.capacity += 1;
  } else {
    if (!e.slot || *e.slot < 0 || *e.slot > v.degree()) {
      throw InvalidArgument("saturated bucket needs a slot in [0, deg]");
    }
    v.children.insert(v.children.begin() + *e.slot, BucketNode{{label}, 1, {}});
  }
  return BucketTree(b, std::move(root));
}

std::vector<std::pair<GrowthEvent, Rational>> growth_events(const BucketTree& t,
                                                            const FamilySpec& spec) {
  const AttachmentWeights aw = attachment_weights(t, spec);
  const auto nodes = t.preorder();
  const int b = t.bucket_size();
  std::vector<std::pair<GrowthEvent, Rational>> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (aw.weights[i] == 0) continue;
    Rational pc(Integer(static_cast<long>(aw.weights[i])), Integer(static_cast<long>(aw.total)));
    pc.canonicalize();
    if (nodes[i]->capacity < b) {
      out.push_back({GrowthEvent{i, std::nullopt, nodes[i]->capacity + 1}, pc});
    } else {
      const int slots = nodes[i]->degree() + 1;
      for (int s = 0; s < slots; ++s) out.push_back({GrowthEvent{i, s, 1}, pc / slots});
    }
  }
  return out;
}

BucketTree grow_step(const BucketTree& t, const FamilySpec& spec, CounterRng& rng) {
  const AttachmentWeights aw = attachment_weights(t, spec);
  auto u = static_cast<std::int64_t>(rng.uniform_below(static_cast<std::uint64_t>(aw.total)));
  std::size_t target = 0;
  for (; target + 1 < aw.weights.size(); ++target) {
    if (u < aw.weights[target]) break;
    u -= aw.weights[target];
  }
  const BucketNode& v = *t.preorder()[target];
  GrowthEvent e{target, std::nullopt, 1};
  if (v.capacity < t.bucket_size()) {
    e.resulting_capacity = v.capacity + 1;
  } else {
    e.slot = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(v.degree()) + 1));
  }
  return apply_growth(t, e);
}

BucketTree sample_tree(const FamilySpec& spec, int n, CounterRng& rng) {
  if (n < 1) throw InvalidArgument("tree size n must be at least 1");
  BucketTree t = BucketTree::singleton(spec.bucket_size());
  while (t.size() < n) t = grow_step(t, spec, rng);
  return t;
}

std::vector<TreeDistribution> exact_distributions(const FamilySpec& spec, int n, int max_size) {
  if (n < 1) throw InvalidArgument("tree size n must be at least 1");
  if (n > max_size) {
    throw ResourceLimit("refusing exact distribution at size " + std::to_string(n) + " (limit " +
                        std::to_string(max_size) + ")");
  }
  std::vector<TreeDistribution> out;
  TreeDistribution current;
  current.size = 1;
  current.probabilities[canonical_encode(BucketTree::singleton(spec.bucket_size()))] = 1;
  out.push_back(current);
  for (int k = 1; k < n; ++k) {
    TreeDistribution next;
    next.size = k + 1;
    for (const auto& [key, p] : current.probabilities) {
      const BucketTree t = canonical_decode(key);
      for (const auto& [event, q] : growth_events(t, spec)) {
        next.probabilities[canonical_encode(apply_growth(t, event))] += p * q;
      }
    }
    current = std::move(next);
    out.push_back(current);
  }
  return out;
}

TreeDistribution exact_distribution(const FamilySpec& spec, int n, int max_size) {
  return std::move(exact_distributions(spec, n, max_size).back());
}

namespace {

// Returns false when the node loses all of its labels.
bool strip_node(BucketNode& v, int j) {
  std::erase_if(v.labels, [j](int l) { return l > j; });
  if (v.labels.empty()) return false;
  v.capacity = static_cast<int>(v.labels.size());
  std::erase_if(v.children, [j](BucketNode& c) { return !strip_node(c, j); });
  return true;
}

}  // namespace

BucketTree strip_labels(const BucketTree& t, int j) {
  if (!t.labelled()) throw InvalidArgument("strip_labels needs a labelled tree");
  if (j < 1 || j > t.size()) throw InvalidArgument("strip_labels needs 1 <= j <= |T|");
  BucketNode root = t.root();
  strip_node(root, j);
  return BucketTree(t.bucket_size(), std::move(root));
}

TreeDistribution pushforward_strip(const TreeDistribution& dist, int j) {
  TreeDistribution out;
  out.size = j;
  for (const auto& [key, p] : dist.probabilities) {
    out.probabilities[canonical_encode(strip_labels(canonical_decode(key), j))] += p;
  }
  return out;
}

}  // namespace bucketree
