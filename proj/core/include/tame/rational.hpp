#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace tame {

// Exact rational scalar. Always stored in lowest terms with a positive
// denominator; arithmetic never rounds.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  return Rational(num, den);
}

// Renders as "p" or "p/q" with q > 0.
inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

// Parses "p", "p/q", "-p/q". Returns nullopt on malformed input.
std::optional<Rational> parse_rational(const std::string& text);

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// Three-way comparison by cross multiplication. The library's operator<
// runs a continued-fraction algorithm whose repeated big-integer divisions
// dominate hot loops; two single-limb products are far cheaper.
inline int rational_cmp(const Rational& a, const Rational& b) {
  Integer l = numerator(a) * denominator(b);
  Integer r = numerator(b) * denominator(a);
  if (l < r) return -1;
  return r < l ? 1 : 0;
}

inline bool rational_lt(const Rational& a, const Rational& b) {
  return rational_cmp(a, b) < 0;
}

// Largest integer k with k <= q.
inline Integer floor_int(const Rational& q) {
  Integer d = numerator(q) / denominator(q);
  if (q < 0 && d * denominator(q) != numerator(q)) d -= 1;
  return d;
}

inline Integer ceil_int(const Rational& q) { return -floor_int(-q); }

}  // namespace tame
