#include "bucketree/rng.hpp"

#include "bucketree/error.hpp"

namespace bucketree {

namespace {

__extension__ using u128 = unsigned __int128;

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), key_(mix64(seed ^ mix64(stream * kGamma + 0x632BE59BD9B4E019ULL))) {}

CounterRng::result_type CounterRng::operator()() {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

std::uint64_t CounterRng::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("uniform_below needs a positive bound");
  // Lemire's multiply-shift with rejection.
  u128 m = static_cast<u128>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>((*this)()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

Integer CounterRng::uniform_below(const Integer& bound) {
  if (bound <= 0) throw InvalidArgument("uniform_below needs a positive bound");
  if (bound.fits_ulong_p()) return Integer(static_cast<unsigned long>(uniform_below(bound.get_ui())));
  const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  while (true) {
    Integer candidate = 0;
    std::size_t have = 0;
    while (have < bits) {
      candidate <<= 64;
      const std::uint64_t raw = (*this)();
      Integer word;
      mpz_import(word.get_mpz_t(), 1, 1, sizeof(raw), 0, 0, &raw);
      candidate += word;
      have += 64;
    }
    candidate >>= static_cast<mp_bitcnt_t>(have - bits);
    if (candidate < bound) return candidate;
  }
}

double CounterRng::uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

CounterRng CounterRng::split(std::uint64_t index) const {
  return CounterRng(seed_, mix64(stream_ + 1) ^ mix64(index + kGamma));
}

}  // namespace bucketree
