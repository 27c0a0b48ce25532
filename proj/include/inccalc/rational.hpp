#pragma once

// Exact rational arithmetic for point weights and probabilities.

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "inccalc/error.hpp"

namespace inccalc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

namespace detail {

inline BigInt parse_digits(std::string_view s, std::size_t offset) {
  if (s.empty()) throw ParseError("expected digits", offset);
  BigInt out = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw ParseError(std::string("unexpected character '") + s[i] + "' in number", offset + i);
    out = out * 10 + (s[i] - '0');
  }
  return out;
}

inline BigInt pow10(unsigned n) {
  BigInt out = 1;
  for (unsigned i = 0; i < n; ++i) out *= 10;
  return out;
}

}  // namespace detail

/// Parses `n`, `n/d` or a decimal `n.ddd`, with an optional leading minus.
inline Rational parse_rational(std::string_view text) {
  std::size_t start = 0;
  bool negative = false;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    negative = text[0] == '-';
    start = 1;
  }
  std::string_view body = text.substr(start);
  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    BigInt num = detail::parse_digits(body.substr(0, slash), start);
    BigInt den = detail::parse_digits(body.substr(slash + 1), start + slash + 1);
    if (den == 0) throw ParseError("zero denominator", start + slash + 1);
    value = Rational(num, den);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view whole = body.substr(0, dot);
    std::string_view frac = body.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw ParseError("expected digits", start);
    BigInt w = whole.empty() ? BigInt(0) : detail::parse_digits(whole, start);
    BigInt f = frac.empty() ? BigInt(0) : detail::parse_digits(frac, start + dot + 1);
    BigInt scale = detail::pow10(static_cast<unsigned>(frac.size()));
    value = Rational(w * scale + f, scale);
  } else {
    value = Rational(detail::parse_digits(body, start));
  }
  return negative ? Rational(-value) : value;
}

/// `num/den`, or just `num` when the denominator is 1.
inline std::string to_fraction(const Rational& r) {
  BigInt den = denominator_of(r);
  if (den == 1) return numerator_of(r).str();
  return numerator_of(r).str() + "/" + den.str();
}

/// Decimal rendering rounded half away from zero to `digits` places,
/// trailing zeros trimmed.
inline std::string to_decimal(const Rational& r, int digits = 6) {
  BigInt scale = detail::pow10(static_cast<unsigned>(digits < 0 ? 0 : digits));
  Rational scaled = abs(r) * scale;
  BigInt num = numerator_of(scaled);
  BigInt den = denominator_of(scaled);
  BigInt rounded = (2 * num + den) / (2 * den);
  std::string s = rounded.str();
  if (digits > 0) {
    if (s.size() <= static_cast<std::size_t>(digits))
      s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (r < 0 && s != "0") s.insert(0, "-");
  return s;
}

/// The dual rendering used for probabilities: `num/den (= decimal)`.
inline std::string format_probability(const Rational& r, int digits = 6) {
  return to_fraction(r) + " (= " + to_decimal(r, digits) + ")";
}

}  // namespace inccalc
