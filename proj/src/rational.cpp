#include "bucketree/rational.hpp"

#include <cctype>

#include "bucketree/error.hpp"

namespace bucketree {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_integer_token(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  return Integer(std::string(s), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  const auto slash = s.find('/');
  const std::string_view num = trim(s.substr(0, slash));
  if (!is_integer_token(num)) {
    throw InvalidArgument("not a rational number: '" + std::string(text) + "'");
  }
  Rational q;
  if (slash == std::string_view::npos) {
    q = Rational(parse_integer(num));
  } else {
    const std::string_view den = trim(s.substr(slash + 1));
    if (!is_integer_token(den)) {
      throw InvalidArgument("not a rational number: '" + std::string(text) + "'");
    }
    const Integer d = parse_integer(den);
    if (d == 0) throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
    q = Rational(parse_integer(num), d);
    q.canonicalize();
  }
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_string(const Integer& z) { return z.get_str(); }

double to_double(const Rational& q) { return q.get_d(); }

Integer factorial(int n) {
  Integer r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

Rational falling_factorial(const Rational& x, int k) {
  Rational r = 1;
  for (int i = 0; i < k; ++i) r *= x - i;
  return r;
}

Rational binomial(const Rational& x, int k) {
  if (k < 0) return 0;
  Rational r = falling_factorial(x, k) / Rational(factorial(k));
  r.canonicalize();
  return r;
}

Rational power(const Rational& x, int e) {
  if (e < 0) {
    if (x == 0) throw InvalidArgument("zero raised to a negative power");
    return Rational(1) / power(x, -e);
  }
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace bucketree
