#pragma once

// Probabilities, conditional probabilities, correlations and probability
// intervals derived from incidences.

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <string>

#include "inccalc/evaluate.hpp"
#include "inccalc/rational.hpp"

namespace inccalc {

/// p(A) = wp(i(A)).
inline Rational prob(const Formula& f, const Environment& env, const SampleSpace& w) {
  return wp(incidence_of(f, env, w), w);
}

/// p(A|B) = wp(i(A) n i(B)) / wp(i(B)); throws ZeroConditioning if p(B) = 0.
inline Rational cond_prob(const Formula& a, const Formula& b, const Environment& env,
                          const SampleSpace& w) {
  Incidence ib = incidence_of(b, env, w);
  Rational pb = wp(ib, w);
  if (pb == 0) throw ZeroConditioning();
  return wp(incidence_of(a, env, w) & ib, w) / pb;
}

/// c(A,B) with
///   p(A & B) = p(A) p(B) + c * sqrt(p(A) p(~A) p(B) p(~B)).
/// The square and the sign are exact; only `value()` is rounded.
class Correlation {
 public:
  using Decimal = boost::multiprecision::cpp_dec_float_50;

  Correlation(Rational numerator, Rational variance_product)
      : numerator_(std::move(numerator)), variance_product_(std::move(variance_product)) {}

  /// p(A & B) - p(A) p(B).
  const Rational& numerator() const noexcept { return numerator_; }
  /// p(A) p(~A) p(B) p(~B); always > 0.
  const Rational& variance_product() const noexcept { return variance_product_; }

  Rational squared() const { return numerator_ * numerator_ / variance_product_; }
  int sign() const { return numerator_ > 0 ? 1 : (numerator_ < 0 ? -1 : 0); }

  Decimal precise() const {
    Decimal sq = Decimal(numerator_of(squared())) / Decimal(denominator_of(squared()));
    Decimal mag = boost::multiprecision::sqrt(sq);
    return sign() < 0 ? Decimal(-mag) : mag;
  }

  double value() const { return precise().convert_to<double>(); }

  /// Signed decimal to `digits` places (trailing zeros trimmed).
  std::string decimal(int digits = 6) const {
    // Round the 50-digit value through an exact rational.
    Decimal scaled = precise();
    for (int i = 0; i < digits + 4; ++i) scaled *= 10;
    BigInt units = boost::multiprecision::round(scaled).convert_to<BigInt>();
    return to_decimal(Rational(units, detail::pow10(static_cast<unsigned>(digits + 4))), digits);
  }

 private:
  Rational numerator_;
  Rational variance_product_;
};

inline Correlation correlation(const Formula& a, const Formula& b, const Environment& env,
                               const SampleSpace& w) {
  Incidence ia = incidence_of(a, env, w);
  Incidence ib = incidence_of(b, env, w);
  Rational pa = wp(ia, w);
  Rational pb = wp(ib, w);
  if (pa == 0 || pa == 1 || pb == 0 || pb == 1) throw DegenerateMarginal();
  Rational pab = wp(ia & ib, w);
  return Correlation(pab - pa * pb, pa * (1 - pa) * pb * (1 - pb));
}

/// Closed interval [lo, hi] within [0, 1].
struct ProbabilityInterval {
  Rational lo;
  Rational hi;

  bool contains(const Rational& p) const { return lo <= p && p <= hi; }
  bool degenerate() const { return lo == hi; }
  friend bool operator==(const ProbabilityInterval&, const ProbabilityInterval&) = default;
};

/// [wp(inf), wp(sup)]; throws if inf is not contained in sup.
inline ProbabilityInterval interval_of(const Incidence& inf, const Incidence& sup, const SampleSpace& w) {
  if (!inf.subset_of(sup)) throw Error("inconsistent bounds: inf is not contained in sup");
  return {wp(inf, w), wp(sup, w)};
}

/// `[lo, hi]` with each end in `num/den (= decimal)` form.
inline std::string format_interval(const ProbabilityInterval& iv, int digits = 6) {
  return "[" + format_probability(iv.lo, digits) + ", " + format_probability(iv.hi, digits) + "]";
}

}  // namespace inccalc
