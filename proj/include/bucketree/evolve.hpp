#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bucketree/rational.hpp"
#include "bucketree/rng.hpp"
#include "bucketree/tree.hpp"
#include "bucketree/weights.hpp"

namespace bucketree {

inline constexpr int kDefaultMaxExactSize = 9;

// Exact law of a random labelled tree of fixed size, keyed by canonical
// encoding.
struct TreeDistribution {
  int size = 0;
  std::map<std::string, Rational> probabilities;

  Rational total() const;
};

// Where label n+1 goes: into the unsaturated bucket `target`, or as a new
// capacity-1 child of the saturated bucket `target` at position `slot`.
struct GrowthEvent {
  std::size_t target = 0;        // preorder index
  std::optional<int> slot;       // in [0, deg(target)] iff target saturated
  int resulting_capacity = 1;    // capacity of the bucket now holding n+1
};

// q_n p(v) for every node in preorder, scaled by one common positive integer
// so that all entries are integers; `total` is the scaled q_n.
struct AttachmentWeights {
  std::vector<std::int64_t> weights;
  std::int64_t total = 0;
};

AttachmentWeights attachment_weights(const BucketTree& t, const FamilySpec& spec);

// p(v) for the node with preorder index v:
//   c(v)/n,  ((d-1)c(v)+1-deg(v))/((d-1)n+1),  (deg(v)+(alpha+1)c(v)-1)/((alpha+1)n-1).
Rational attachment_probability(const BucketTree& t, std::size_t v, const FamilySpec& spec);

// Inserts label |t|+1 as described by the event.
BucketTree apply_growth(const BucketTree& t, const GrowthEvent& e);

// Every growth event with its probability; saturated targets split p(v)
// uniformly over their deg(v)+1 slots.
std::vector<std::pair<GrowthEvent, Rational>> growth_events(const BucketTree& t,
                                                            const FamilySpec& spec);

BucketTree grow_step(const BucketTree& t, const FamilySpec& spec, CounterRng& rng);

// Runs the tree evolution process from the single bucket {1} up to size n.
BucketTree sample_tree(const FamilySpec& spec, int n, CounterRng& rng);

// Exact law of sample_tree(spec, n), by pushing every size-k tree's mass
// through all growth events. Throws ResourceLimit when n > max_size.
TreeDistribution exact_distribution(const FamilySpec& spec, int n,
                                    int max_size = kDefaultMaxExactSize);

// Same, returning the laws for sizes 1..n (index k-1 holds size k).
std::vector<TreeDistribution> exact_distributions(const FamilySpec& spec, int n,
                                                  int max_size = kDefaultMaxExactSize);

// Removes every label larger than j and deletes buckets left empty.
BucketTree strip_labels(const BucketTree& t, int j);

// Image of a tree law under strip_labels(., j).
TreeDistribution pushforward_strip(const TreeDistribution& dist, int j);

}  // namespace bucketree
