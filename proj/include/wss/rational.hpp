#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <string>

#include <wss/errors.hpp>

namespace wss {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Canonical textual form: "p" for integers, "p/q" otherwise, q > 0, lowest
// terms (the representation is always normalized).
inline std::string to_string(const Rat& x) {
  const Int num = numerator(x);
  const Int den = denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace detail {

// Accepts an optionally signed run of digits; returns false on anything else.
inline bool parse_signed_digits(const std::string& text, Int& out) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = (text[i] == '-');
    ++i;
  }
  if (i == text.size()) return false;
  Int value = 0;
  for (; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
    value = value * 10 + (text[i] - '0');
  }
  out = negative ? -value : value;
  return true;
}

}  // namespace detail

// Parses "p" or "p/q" with optional signs on either part.  Rejects zero
// denominators, embedded whitespace and any other malformation.
inline Rat parse_rat(const std::string& text) {
  const std::size_t slash = text.find('/');
  Int num, den = 1;
  if (slash == std::string::npos) {
    if (!detail::parse_signed_digits(text, num)) {
      throw ParseError("not a rational: '" + text + "'");
    }
  } else {
    if (!detail::parse_signed_digits(text.substr(0, slash), num) ||
        !detail::parse_signed_digits(text.substr(slash + 1), den)) {
      throw ParseError("not a rational: '" + text + "'");
    }
    if (den == 0) {
      throw ParseError("zero denominator in '" + text + "'");
    }
    if (den < 0) {  // the two-argument constructor wants a positive denominator
      num = -num;
      den = -den;
    }
  }
  return Rat(num, den);
}

}  // namespace wss
