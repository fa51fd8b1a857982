#pragma once

// Exact arbitrary-precision arithmetic used by every enumeration and
// verification routine. Backed by GMP's mpq_class, which keeps values in
// canonical reduced form with a positive denominator.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace bucketree {

using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "p/q", "p", or "-p/q" (whitespace trimmed). Throws InvalidArgument.
Rational parse_rational(std::string_view text);

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

double to_double(const Rational& q);

Integer factorial(int n);

// Generalised binomial coefficient binom(x, k) = x (x-1) ... (x-k+1) / k!.
Rational binomial(const Rational& x, int k);

// x^e for any integer e (x != 0 when e < 0).
Rational power(const Rational& x, int e);

// Falling factorial x (x-1) ... (x-k+1).
Rational falling_factorial(const Rational& x, int k);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace bucketree
