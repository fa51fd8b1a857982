#pragma once

#include <cstdint>
#include <limits>

#include "bucketree/rational.hpp"

namespace bucketree {

// Counter-based 64-bit generator: output i is a SplitMix64 finaliser applied
// to key + i * golden-gamma, where key is derived from (seed, stream). Any
// (seed, stream, position) triple is reproducible, and distinct streams give
// independent sequences for parallel replications.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform integer in [0, bound), bound > 0, without modulo bias.
  std::uint64_t uniform_below(std::uint64_t bound);
  Integer uniform_below(const Integer& bound);

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  // Independent generator for sub-stream `index`.
  CounterRng split(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Default master seed used by tools when none is given.
inline constexpr std::uint64_t kDefaultSeed = 20240917;

}  // namespace bucketree
