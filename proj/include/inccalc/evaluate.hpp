#pragma once

// Truth-functional evaluation of sentences to incidences, and the
// per-point truth semantics it must agree with.

#include <map>
#include <string>

#include "inccalc/formula.hpp"
#include "inccalc/sample_space.hpp"

namespace inccalc {

/// Atom name -> incidence, all over one sample space.
using Environment = std::map<std::string, Incidence>;

namespace detail {

inline const Incidence& lookup_atom(const Environment& env, const std::string& name) {
  auto it = env.find(name);
  if (it == env.end()) throw UnboundAtom(name);
  return it->second;
}

}  // namespace detail

/// i(t) = w, i(f) = {}, i(~A) = w \ i(A), i(A & B) = i(A) n i(B),
/// i(A | B) = i(A) u i(B), i(A -> B) = (w \ i(A)) u i(B).
inline Incidence incidence_of(const Formula& f, const Environment& env, const SampleSpace& w) {
  switch (f.kind()) {
    case Connective::True: return w.full();
    case Connective::False: return w.empty();
    case Connective::Atom: {
      const Incidence& i = detail::lookup_atom(env, f.name());
      w.require_width(i);
      return i;
    }
    case Connective::Not: return ~incidence_of(f.lhs(), env, w);
    case Connective::And: return incidence_of(f.lhs(), env, w) & incidence_of(f.rhs(), env, w);
    case Connective::Or: return incidence_of(f.lhs(), env, w) | incidence_of(f.rhs(), env, w);
    case Connective::Implies: return ~incidence_of(f.lhs(), env, w) | incidence_of(f.rhs(), env, w);
  }
  return w.empty();
}

/// Classical truth of `f` at a single point, reading atom `a` as true
/// iff the point is in env[a].
inline bool holds_at(const Formula& f, std::size_t point, const Environment& env) {
  if (!env.empty() && point >= env.begin()->second.width())
    throw Error("point index " + std::to_string(point) + " out of range for width " +
                std::to_string(env.begin()->second.width()));
  switch (f.kind()) {
    case Connective::True: return true;
    case Connective::False: return false;
    case Connective::Atom: return detail::lookup_atom(env, f.name()).test(point);
    case Connective::Not: return !holds_at(f.lhs(), point, env);
    case Connective::And: return holds_at(f.lhs(), point, env) && holds_at(f.rhs(), point, env);
    case Connective::Or: return holds_at(f.lhs(), point, env) || holds_at(f.rhs(), point, env);
    case Connective::Implies: return !holds_at(f.lhs(), point, env) || holds_at(f.rhs(), point, env);
  }
  return false;
}

}  // namespace inccalc
