#pragma once

// Sample spaces, weighted points and the incidence bit-vector algebra.

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "inccalc/error.hpp"
#include "inccalc/rational.hpp"

namespace inccalc {

/// A set of sample-space points stored as a fixed-width bit vector.
/// Bits beyond `width()` in the last word are kept zero.
class Incidence {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  Incidence() = default;
  explicit Incidence(std::size_t width) : width_(width), words_(word_count(width), 0) {}

  static Incidence full(std::size_t width) {
    Incidence out(width);
    std::fill(out.words_.begin(), out.words_.end(), ~Word{0});
    out.clear_tail();
    return out;
  }

  static Incidence from_points(std::size_t width, std::span<const std::size_t> points) {
    Incidence out(width);
    for (std::size_t k : points) out.set(k);
    return out;
  }

  static Incidence from_points(std::size_t width, std::initializer_list<std::size_t> points) {
    return from_points(width, std::span<const std::size_t>(points.begin(), points.size()));
  }

  /// Points lo..hi inclusive.
  static Incidence range(std::size_t width, std::size_t lo, std::size_t hi) {
    Incidence out(width);
    for (std::size_t k = lo; k <= hi; ++k) out.set(k);
    return out;
  }

  std::size_t width() const noexcept { return width_; }

  bool test(std::size_t k) const {
    check_index(k);
    return (words_[k / kWordBits] >> (k % kWordBits)) & 1U;
  }

  void set(std::size_t k, bool value = true) {
    check_index(k);
    Word mask = Word{1} << (k % kWordBits);
    if (value)
      words_[k / kWordBits] |= mask;
    else
      words_[k / kWordBits] &= ~mask;
  }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool none() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](Word w) { return w == 0; });
  }

  bool all() const noexcept { return count() == width_; }

  bool subset_of(const Incidence& other) const {
    require_same_width(other);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }

  bool intersects(const Incidence& other) const {
    require_same_width(other);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & other.words_[i]) return true;
    return false;
  }

  Incidence operator~() const {
    Incidence out = *this;
    for (Word& w : out.words_) w = ~w;
    out.clear_tail();
    return out;
  }

  Incidence& operator&=(const Incidence& rhs) {
    require_same_width(rhs);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= rhs.words_[i];
    return *this;
  }

  Incidence& operator|=(const Incidence& rhs) {
    require_same_width(rhs);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= rhs.words_[i];
    return *this;
  }

  /// Set difference.
  Incidence& operator-=(const Incidence& rhs) {
    require_same_width(rhs);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~rhs.words_[i];
    return *this;
  }

  friend Incidence operator&(Incidence lhs, const Incidence& rhs) { return lhs &= rhs; }
  friend Incidence operator|(Incidence lhs, const Incidence& rhs) { return lhs |= rhs; }
  friend Incidence operator-(Incidence lhs, const Incidence& rhs) { return lhs -= rhs; }

  friend bool operator==(const Incidence& a, const Incidence& b) {
    return a.width_ == b.width_ && std::equal(a.words_.begin(), a.words_.end(), b.words_.begin());
  }

  template <typename Fn>
  void for_each_point(Fn&& fn) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      Word w = words_[i];
      while (w) {
        fn(i * kWordBits + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  std::vector<std::size_t> points() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for_each_point([&](std::size_t k) { out.push_back(k); });
    return out;
  }

  std::span<const Word> words() const noexcept { return {words_.data(), words_.size()}; }

  void require_same_width(const Incidence& other) const {
    if (other.width_ != width_) throw WidthMismatch(width_, other.width_);
  }

 private:
  static std::size_t word_count(std::size_t width) { return (width + kWordBits - 1) / kWordBits; }

  void check_index(std::size_t k) const {
    if (k >= width_)
      throw Error("point index " + std::to_string(k) + " out of range for width " +
                  std::to_string(width_));
  }

  void clear_tail() noexcept {
    if (std::size_t r = width_ % kWordBits; r != 0 && !words_.empty())
      words_.back() &= (Word{1} << r) - 1;
  }

  std::size_t width_ = 0;
  boost::container::small_vector<Word, 2> words_;
};

/// A finite, exhaustive set of disjoint points with exact weights summing to 1.
class SampleSpace {
 public:
  /// `size` points of weight 1/size each.
  static SampleSpace uniform(std::size_t size) {
    if (size == 0) throw Error("sample space must have at least one point");
    SampleSpace s;
    s.weights_.assign(size, Rational(1, static_cast<long long>(size)));
    s.uniform_ = true;
    return s;
  }

  static SampleSpace weighted(std::vector<Rational> weights) {
    if (weights.empty()) throw Error("sample space must have at least one point");
    Rational total = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (weights[k] < 0) throw Error("negative weight at point " + std::to_string(k));
      total += weights[k];
    }
    if (total != 1) throw Error("point weights sum to " + to_fraction(total) + ", not 1");
    SampleSpace s;
    s.uniform_ = std::all_of(weights.begin(), weights.end(),
                             [&](const Rational& w) { return w == weights.front(); });
    s.weights_ = std::move(weights);
    return s;
  }

  std::size_t size() const noexcept { return weights_.size(); }
  bool is_uniform() const noexcept { return uniform_; }
  const Rational& weight(std::size_t k) const { return weights_.at(k); }
  std::span<const Rational> weights() const noexcept { return weights_; }

  Incidence empty() const { return Incidence(size()); }
  Incidence full() const { return Incidence::full(size()); }

  void require_width(const Incidence& i) const {
    if (i.width() != size()) throw WidthMismatch(size(), i.width());
  }

 private:
  SampleSpace() = default;

  std::vector<Rational> weights_;
  bool uniform_ = false;
};

/// Weighted probability: the sum of the weights of the points in `i`.
inline Rational wp(const Incidence& i, const SampleSpace& w) {
  w.require_width(i);
  if (w.is_uniform()) return Rational(static_cast<long long>(i.count()), static_cast<long long>(w.size()));
  Rational total = 0;
  i.for_each_point([&](std::size_t k) { total += w.weight(k); });
  return total;
}

enum class BooleanOp { Not, And, Or, Diff };

inline Incidence boolean_combine(BooleanOp op, const Incidence& lhs,
                                 const std::optional<Incidence>& rhs = std::nullopt) {
  if (op == BooleanOp::Not) {
    if (rhs) throw Error("'not' takes a single operand");
    return ~lhs;
  }
  if (!rhs) throw Error("binary operation requires two operands");
  switch (op) {
    case BooleanOp::And: return lhs & *rhs;
    case BooleanOp::Or: return lhs | *rhs;
    case BooleanOp::Diff: return lhs - *rhs;
    case BooleanOp::Not: break;
  }
  return lhs;
}

/// Character k is '1' iff point k is a member; point 0 is leftmost.
inline std::string encode_bitstring(const Incidence& i) {
  std::string out(i.width(), '0');
  i.for_each_point([&](std::size_t k) { out[k] = '1'; });
  return out;
}

inline Incidence decode_bitstring(std::string_view s, std::size_t width) {
  if (s.size() != width)
    throw ParseError("bit string length " + std::to_string(s.size()) +
                         " does not match space size " + std::to_string(width),
                     0);
  Incidence out(width);
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] == '1')
      out.set(k);
    else if (s[k] != '0')
      throw ParseError(std::string("illegal character '") + s[k] + "' in bit string", k);
  }
  return out;
}

inline Incidence decode_bitstring(std::string_view s, const SampleSpace& w) {
  return decode_bitstring(s, w.size());
}

/// `{k1,k2,...}`; ranges `lo..hi` are accepted inside the braces.
inline std::string format_point_set(const Incidence& i) {
  std::string out = "{";
  bool first = true;
  i.for_each_point([&](std::size_t k) {
    if (!first) out += ',';
    out += std::to_string(k);
    first = false;
  });
  return out + "}";
}

inline Incidence parse_point_set(std::string_view s, std::size_t width) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  };
  auto number = [&]() -> std::size_t {
    skip_ws();
    std::size_t start = pos;
    std::size_t value = 0;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
      value = value * 10 + static_cast<std::size_t>(s[pos] - '0');
      if (value > width) throw ParseError("point index out of range", start);
      ++pos;
    }
    if (pos == start) throw ParseError("expected point index", start);
    if (value >= width)
      throw ParseError("point index " + std::to_string(value) + " out of range for width " +
                           std::to_string(width),
                       start);
    return value;
  };

  Incidence out(width);
  skip_ws();
  if (pos >= s.size() || s[pos] != '{') throw ParseError("expected '{'", pos);
  ++pos;
  skip_ws();
  if (pos < s.size() && s[pos] == '}') {
    ++pos;
  } else {
    while (true) {
      std::size_t lo = number();
      std::size_t hi = lo;
      skip_ws();
      if (s.substr(pos, 2) == "..") {
        pos += 2;
        std::size_t at = pos;
        hi = number();
        if (hi < lo) throw ParseError("empty range", at);
      }
      for (std::size_t k = lo; k <= hi; ++k) out.set(k);
      skip_ws();
      if (pos < s.size() && s[pos] == ',') {
        ++pos;
        continue;
      }
      if (pos < s.size() && s[pos] == '}') {
        ++pos;
        break;
      }
      throw ParseError("expected ',' or '}'", pos);
    }
  }
  skip_ws();
  if (pos != s.size()) throw ParseError("trailing characters after point set", pos);
  return out;
}

/// Accepts either a bit string or a point-set literal.
inline Incidence parse_incidence(std::string_view s, std::size_t width) {
  std::size_t first = s.find_first_not_of(" \t");
  if (first != std::string_view::npos && s[first] == '{') return parse_point_set(s, width);
  std::size_t last = s.find_last_not_of(" \t");
  if (first == std::string_view::npos) throw ParseError("expected incidence", 0);
  return decode_bitstring(s.substr(first, last - first + 1), width);
}

/// Bits needed to store every sentence's probability over `propositions`
/// atoms at `digits` decimal digits, against storing one incidence per atom.
struct StorageCost {
  BigInt numeric_bits;    // 10 * m * 2^n
  BigInt incidence_bits;  // n * 10^m
};

inline StorageCost storage_bits(unsigned propositions, unsigned digits) {
  if (propositions < 1 || digits < 1) throw Error("storage_bits requires n >= 1 and m >= 1");
  BigInt clauses = BigInt(1) << propositions;
  return {10 * BigInt(digits) * clauses, BigInt(propositions) * detail::pow10(digits)};
}

}  // namespace inccalc
