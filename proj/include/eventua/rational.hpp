#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "eventua/error.hpp"

namespace eventua {

// Exact rational payload attached to individuals for order comparisons.
// Normalized: den > 0, gcd(|num|, den) == 1. Desk-scale magnitudes; the
// comparison cross products go through 128-bit intermediates.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;

  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) fail(ErrorKind::Parse, "rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  bool operator==(const Rational& o) const = default;

  // Three-way sign of (*this - o).
  int cmp(const Rational& o) const {
    __int128 l = static_cast<__int128>(num) * o.den;
    __int128 r = static_cast<__int128>(o.num) * den;
    if (l < r) return -1;
    if (l > r) return 1;
    return 0;
  }

  bool operator<(const Rational& o) const { return cmp(o) < 0; }
  bool operator<=(const Rational& o) const { return cmp(o) <= 0; }
  bool operator>(const Rational& o) const { return cmp(o) > 0; }
  bool operator>=(const Rational& o) const { return cmp(o) >= 0; }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

// Accepts "42", "-3", "3/2", "-3/4", "1.5", "-0.25".
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) fail(ErrorKind::Parse, "empty numeric value");
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '-' || text[pos] == '+') {
    negative = text[pos] == '-';
    ++pos;
  }
  auto digits = [&](std::int64_t& out) {
    if (pos >= text.size() || text[pos] < '0' || text[pos] > '9')
      fail(ErrorKind::Parse, "malformed numeric value '" + text + "'");
    out = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      out = out * 10 + (text[pos] - '0');
      ++pos;
    }
  };
  std::int64_t whole = 0;
  digits(whole);
  std::int64_t num = whole;
  std::int64_t den = 1;
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    digits(den);
  } else if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::size_t start = pos;
    std::int64_t frac = 0;
    digits(frac);
    for (std::size_t k = start; k < pos; ++k) den *= 10;
    num = whole * den + frac;
  }
  if (pos != text.size()) fail(ErrorKind::Parse, "malformed numeric value '" + text + "'");
  if (negative) num = -num;
  return Rational(num, den);
}

}  // namespace eventua
