#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace inccalc {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two incidences (or an incidence and a space) disagree on width.
class WidthMismatch : public Error {
 public:
  WidthMismatch(std::size_t expected, std::size_t actual)
      : Error("width mismatch: expected " + std::to_string(expected) +
              ", got " + std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  std::size_t expected() const noexcept { return expected_; }
  std::size_t actual() const noexcept { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

// Malformed textual input. `position` is a zero-based character offset
// into the text that was being parsed.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnboundAtom : public Error {
 public:
  explicit UnboundAtom(const std::string& name)
      : Error("unbound atom '" + name + "'"), name_(name) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

// Probability of the conditioning sentence is zero.
class ZeroConditioning : public Error {
 public:
  ZeroConditioning() : Error("conditioning on a sentence of probability zero") {}
};

// Correlation requested for a sentence whose probability is 0 or 1.
class DegenerateMarginal : public Error {
 public:
  DegenerateMarginal() : Error("correlation undefined: degenerate marginal (p in {0,1})") {}
};

// Requested marginals/correlations cannot be realised on the sample space.
class InfeasibleTarget : public Error {
 public:
  using Error::Error;
};

// Brute-force search requested on an instance beyond the size guard.
class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace inccalc
