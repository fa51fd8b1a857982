#pragma once

// Brute-force reference computations used only by the tests. Each one is
// written independently of the library routine it checks: labelling counts
// come from exhaustive label placement, totals from every insertion history,
// urn laws from every draw sequence.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "bucketree/rational.hpp"
#include "bucketree/tree.hpp"

namespace oracle {

using bucketree::BucketNode;
using bucketree::BucketTree;
using bucketree::Integer;
using bucketree::Rational;

struct FlatNode {
  int parent = -1;
  int capacity = 1;
};

inline void flatten(const BucketNode& v, int parent, std::vector<FlatNode>& out) {
  out.push_back({parent, v.capacity});
  const int self = static_cast<int>(out.size()) - 1;
  for (const auto& c : v.children) flatten(c, self, out);
}

// Places labels 1, 2, ... one at a time into any bucket that still has room
// and whose parent is full, counting the completed placements.
inline Integer count_labellings(const BucketTree& shape) {
  std::vector<FlatNode> nodes;
  flatten(shape.root(), -1, nodes);
  std::vector<int> filled(nodes.size(), 0);
  std::function<Integer(int)> go = [&](int remaining) -> Integer {
    if (remaining == 0) return 1;
    Integer total = 0;
    for (std::size_t v = 0; v < nodes.size(); ++v) {
      if (filled[v] == nodes[v].capacity) continue;
      const int p = nodes[v].parent;
      if (p >= 0 && filled[static_cast<std::size_t>(p)] != nodes[static_cast<std::size_t>(p)].capacity) continue;
      ++filled[v];
      total += go(remaining - 1);
      --filled[v];
    }
    return total;
  };
  return go(shape.size());
}

// Same count by testing every permutation of 1..n against the ordering rules.
inline Integer count_labellings_by_permutation(const BucketTree& shape) {
  std::vector<FlatNode> nodes;
  flatten(shape.root(), -1, nodes);
  std::vector<int> slot_node;
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    for (int i = 0; i < nodes[v].capacity; ++i) slot_node.push_back(static_cast<int>(v));
  }
  std::vector<int> perm(slot_node.size());
  std::iota(perm.begin(), perm.end(), 1);
  Integer count = 0;
  do {
    std::vector<int> lo(nodes.size(), 1 << 30), hi(nodes.size(), 0);
    bool ok = true;
    int prev_node = -1, prev_label = 0;
    for (std::size_t i = 0; i < perm.size() && ok; ++i) {
      const int v = slot_node[i];
      if (v == prev_node && perm[i] <= prev_label) ok = false;
      prev_node = v;
      prev_label = perm[i];
      lo[static_cast<std::size_t>(v)] = std::min(lo[static_cast<std::size_t>(v)], perm[i]);
      hi[static_cast<std::size_t>(v)] = std::max(hi[static_cast<std::size_t>(v)], perm[i]);
    }
    for (std::size_t v = 0; v < nodes.size() && ok; ++v) {
      const int p = nodes[v].parent;
      if (p >= 0 && lo[v] <= hi[static_cast<std::size_t>(p)]) ok = false;
    }
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

// A labelled tree kept as a growable node list (preorder not maintained).
struct GrowNode {
  int parent = -1;
  std::vector<int> labels;
  std::vector<int> children;  // ordered
};

using Forest = std::vector<GrowNode>;

inline int degree(const Forest& f, int v) { return static_cast<int>(f[static_cast<std::size_t>(v)].children.size()); }

// Every labelled tree of size n, each produced exactly once by inserting
// labels in increasing order at every legal position.
inline void for_each_labelled_tree(int b, int n, const std::function<void(const Forest&)>& visit) {
  Forest start(1);
  start[0].labels = {1};
  std::function<void(Forest&, int)> go = [&](Forest& f, int size) {
    if (size == n) {
      visit(f);
      return;
    }
    const int label = size + 1;
    const std::size_t count = f.size();
    for (std::size_t v = 0; v < count; ++v) {
      if (static_cast<int>(f[v].labels.size()) < b) {
        f[v].labels.push_back(label);
        go(f, size + 1);
        f[v].labels.pop_back();
        continue;
      }
      for (int slot = 0; slot <= degree(f, static_cast<int>(v)); ++slot) {
        Forest g = f;
        GrowNode child;
        child.parent = static_cast<int>(v);
        child.labels = {label};
        g.push_back(child);
        auto& kids = g[v].children;
        kids.insert(kids.begin() + slot, static_cast<int>(g.size()) - 1);
        go(g, size + 1);
      }
    }
  };
  go(start, 1);
}

// w(T) computed straight from the node list; psi has b entries with
// psi[b-1] standing for phi_0 (psi_b).
inline Rational weight(const Forest& f, int b, const std::vector<Rational>& psi,
                       const std::function<Rational(int)>& phi) {
  Rational w = 1;
  for (std::size_t v = 0; v < f.size(); ++v) {
    const int c = static_cast<int>(f[v].labels.size());
    if (c == b) {
      w *= phi(degree(f, static_cast<int>(v)));
    } else {
      w *= psi[static_cast<std::size_t>(c - 1)];
    }
  }
  return w;
}

inline Rational total_weight(int b, const std::vector<Rational>& psi_1_to_b_minus_1,
                             const std::function<Rational(int)>& phi, int n) {
  std::vector<Rational> psi = psi_1_to_b_minus_1;
  psi.push_back(phi(0));
  Rational total = 0;
  for_each_labelled_tree(b, n, [&](const Forest& f) { total += weight(f, b, psi, phi); });
  return total;
}

// Converts a node list into a library tree (children in list order).
inline BucketNode to_node(const Forest& f, int v) {
  BucketNode out;
  out.labels = f[static_cast<std::size_t>(v)].labels;
  out.capacity = static_cast<int>(out.labels.size());
  for (int c : f[static_cast<std::size_t>(v)].children) out.children.push_back(to_node(f, c));
  return out;
}

inline BucketTree to_tree(const Forest& f, int b) { return BucketTree(b, to_node(f, 0)); }

// Law of W_N for a two-colour urn with increment sigma, summing the
// probability of every draw sequence.
inline std::map<Rational, Rational> urn_law(const Rational& white, const Rational& black,
                                            const Rational& sigma, int draws) {
  std::map<Rational, Rational> law;
  std::function<void(Rational, Rational, Rational, int)> go = [&](Rational w, Rational bl,
                                                                  Rational p, int left) {
    if (left == 0) {
      law[w] += p;
      return;
    }
    const Rational total = w + bl;
    if (w > 0) go(w + sigma, bl, p * w / total, left - 1);
    if (bl > 0) go(w, bl + sigma, p * bl / total, left - 1);
  };
  go(white, black, 1, draws);
  return law;
}

inline Rational binomial(const Rational& x, int k) {
  Rational r = 1;
  for (int i = 0; i < k; ++i) r = r * (x - i) / (i + 1);
  return r;
}

// Labels >= j in the subtree rooted at the bucket holding j.
inline int descendants(const BucketNode& root, int j) {
  std::function<const BucketNode*(const BucketNode&)> find = [&](const BucketNode& v) -> const BucketNode* {
    if (std::find(v.labels.begin(), v.labels.end(), j) != v.labels.end()) return &v;
    for (const auto& c : v.children) {
      if (const BucketNode* hit = find(c)) return hit;
    }
    return nullptr;
  };
  std::function<int(const BucketNode&)> count = [&](const BucketNode& v) {
    int s = static_cast<int>(std::count_if(v.labels.begin(), v.labels.end(), [&](int l) { return l >= j; }));
    for (const auto& c : v.children) s += count(c);
    return s;
  };
  const BucketNode* at = find(root);
  return at ? count(*at) : 0;
}

}  // namespace oracle
