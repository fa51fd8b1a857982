#pragma once

// Bucket ordered trees: rooted ordered trees whose nodes are buckets holding
// up to b labels. A tree is either labelled (every bucket lists its labels)
// or shape-only (every label list is empty and only capacities are kept).

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace bucketree {

struct BucketNode {
  std::vector<int> labels;  // increasing; empty for shape-only trees
  int capacity = 1;
  std::vector<BucketNode> children;

  int degree() const { return static_cast<int>(children.size()); }
  bool is_leaf() const { return children.empty(); }

  friend bool operator==(const BucketNode&, const BucketNode&) = default;
};

class BucketTree {
 public:
  // Validates every structural invariant; throws InvalidArgument.
  BucketTree(int bucket_size, BucketNode root);

  // The size-one tree holding label 1.
  static BucketTree singleton(int bucket_size);

  int bucket_size() const { return bucket_size_; }
  const BucketNode& root() const { return root_; }
  int size() const { return size_; }
  bool labelled() const { return labelled_; }
  std::size_t node_count() const { return node_count_; }

  // Nodes in preorder; the index into this vector is the node identifier
  // used throughout the library.
  std::vector<const BucketNode*> preorder() const;

  // Shape-only copy (labels dropped, capacities kept).
  BucketTree shape() const;

  friend bool operator==(const BucketTree&, const BucketTree&) = default;

 private:
  int bucket_size_;
  BucketNode root_;
  int size_ = 0;
  bool labelled_ = false;
  std::size_t node_count_ = 0;
};

// Mutable access to the node with the given preorder index of a raw node
// hierarchy. Throws InvalidArgument when out of range.
BucketNode& node_at(BucketNode& root, std::size_t preorder_index);

// m_k (unsaturated buckets of capacity k < b) and n_k (saturated buckets of
// out-degree k).
struct NodeCensus {
  std::vector<int> unsaturated;     // index k in [0, b); entry 0 unused
  std::map<int, int> saturated;     // out-degree -> count

  int unsaturated_count(int k) const;
  int saturated_count(int degree) const;
};

NodeCensus census(const BucketTree& t);

// Preorder text form "b<b>|" followed by "<capacity>:<l1,l2,...>:<children>;"
// per node. Injective and order preserving; used as the map key for tree
// distributions.
std::string canonical_encode(const BucketTree& t);
BucketTree canonical_decode(std::string_view encoding);

// {"b": <b>, "root": node} where node = {"labels": [...], "children": [...]}
// and shape-only nodes additionally carry "capacity".
nlohmann::json to_json(const BucketTree& t);
BucketTree tree_from_json(const nlohmann::json& j);

// Compact human-readable form, e.g. "{1,2}[{3},{4}]".
std::string to_display_string(const BucketTree& t);

}  // namespace bucketree
