#pragma once

// Command-line frontend: enumerate, sample, verify, descend, stats.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bucketree/weights.hpp"

namespace bucketree::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

// Environment variable consulted for the default seed.
inline constexpr const char* kSeedEnvVar = "BUCKETREE_SEED";

enum class Format { kCsv, kJson };

struct RunConfig {
  std::string command;
  // Either a family ...
  std::optional<std::string> family;
  std::optional<int> b;
  std::optional<std::string> d;
  std::optional<std::string> alpha;
  // ... or explicit weights.
  std::optional<std::string> psi;
  std::optional<std::string> phi;

  int n = 6;
  int j = 1;
  int K = 1;
  std::uint64_t count = 1;
  std::uint64_t seed = 0;
  Format format = Format::kCsv;
  int max_size = 0;  // 0 selects the module default
  int threads = 1;
};

// The seed used when --seed is absent: $BUCKETREE_SEED if set, otherwise
// kDefaultSeed.
std::uint64_t default_seed();

// Builds a family from its name ("bucket-recursive", "bdary", "balpha") and
// parameters. Throws InvalidArgument.
FamilySpec parse_family(const std::string& name, int b, const std::optional<std::string>& d,
                        const std::optional<std::string>& alpha);

// Parses a degree-weight sequence: a comma-separated list of rationals, or one
// of the rules exp:c (c^k/k!), binom:D (binom(D,k)), negbinom:r
// (binom(r+k-1,k)), seq:c (c^k). Throws InvalidArgument.
DegreeWeights parse_phi(const std::string& text);

// Builds a validated model from --psi/--phi text. With no b given, b is one
// more than the number of psi entries. Throws InvalidArgument.
WeightModel parse_weights(const std::optional<std::string>& psi, const std::string& phi,
                          std::optional<int> b = std::nullopt);

// Parses argv-style arguments (without the program name), runs the command,
// and writes the report to `out` and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Decimal text with 12 significant digits.
std::string format_decimal(double x);

}  // namespace bucketree::cli
