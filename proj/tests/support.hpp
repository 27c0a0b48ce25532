#pragma once

// Random generators and small independent oracles shared by the unit and
// acceptance suites.

#include <set>
#include <string>
#include <vector>

#include "inccalc/inccalc.hpp"

namespace inccalc::fixtures {

inline std::vector<std::string> atom_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(1, static_cast<char>('a' + i)));
  return out;
}

inline Formula random_formula(Rng& rng, const std::vector<std::string>& atoms, std::size_t depth) {
  if (depth <= 1 || rng.below(4) == 0) {
    std::uint64_t r = rng.below(atoms.size() + 1);
    if (r < atoms.size()) return Formula::atom(atoms[r]);
    return rng.coin() ? Formula::truth() : Formula::falsity();
  }
  std::uint64_t kind = rng.below(4);
  Formula lhs = random_formula(rng, atoms, depth - 1);
  if (kind == 0) return Formula::negation(lhs);
  Formula rhs = random_formula(rng, atoms, depth - 1);
  switch (kind) {
    case 1: return Formula::conjunction(lhs, rhs);
    case 2: return Formula::disjunction(lhs, rhs);
    default: return Formula::implication(lhs, rhs);
  }
}

inline Incidence random_incidence(Rng& rng, std::size_t width) {
  Incidence out(width);
  for (std::size_t k = 0; k < width; ++k)
    if (rng.coin()) out.set(k);
  return out;
}

inline Environment random_environment(Rng& rng, const std::vector<std::string>& atoms, std::size_t width) {
  Environment env;
  for (const std::string& a : atoms) env.emplace(a, random_incidence(rng, width));
  return env;
}

/// Random positive integer weights normalised to sum 1; occasionally a
/// point gets weight zero.
inline SampleSpace random_space(Rng& rng, std::size_t width) {
  std::vector<long long> raw(width);
  long long total = 0;
  for (auto& r : raw) {
    r = rng.below(8) == 0 ? 0 : static_cast<long long>(1 + rng.below(97));
    total += r;
  }
  if (total == 0) {
    raw[0] = 1;
    total = 1;
  }
  std::vector<Rational> weights;
  for (long long r : raw) weights.emplace_back(r, total);
  return SampleSpace::weighted(std::move(weights));
}

/// Membership of each point computed one point at a time; independent of
/// the bitwise evaluator.
inline Incidence pointwise_incidence(const Formula& f, const Environment& env, std::size_t width) {
  Incidence out(width);
  for (std::size_t k = 0; k < width; ++k)
    if (holds_at(f, k, env)) out.set(k);
  return out;
}

/// Sum of weights by walking the bit string characters.
inline Rational naive_wp(const Incidence& i, const SampleSpace& w) {
  std::string bits = encode_bitstring(i);
  Rational total = 0;
  for (std::size_t k = 0; k < bits.size(); ++k)
    if (bits[k] == '1') total += w.weight(k);
  return total;
}

/// Bounds that contain `truth`: inf drops random members, sup adds random
/// non-members. With probability 1/3 the bounds are left vacuous.
inline Bounds loosen(Rng& rng, const Incidence& truth) {
  std::size_t width = truth.width();
  if (rng.below(3) == 0) return {Incidence(width), Incidence::full(width)};
  return {truth & random_incidence(rng, width), truth | random_incidence(rng, width)};
}

struct Instance {
  SampleSpace space;
  Environment truth;
  BoundAssignment initial;
};

/// Random sentences over `atom_count` atoms, a random ground-truth model and
/// initial bounds loosened from it (so a legal assignment always exists).
inline Instance sound_instance(Rng& rng, std::size_t width, std::size_t atom_count, std::size_t sentence_count,
                               std::size_t depth = 3) {
  std::vector<std::string> atoms = atom_names(atom_count);
  SampleSpace w = random_space(rng, width);
  Environment truth = random_environment(rng, atoms, width);
  BoundAssignment f(width);
  for (std::size_t s = 0; s < sentence_count; ++s) f.add(random_formula(rng, atoms, depth));
  for (std::size_t i = 0; i < f.size(); ++i) {
    Bounds b = loosen(rng, incidence_of(f.sentence(i), truth, w));
    f.raise_inf(i, b.inf);
    f.lower_sup(i, b.sup);
  }
  return {std::move(w), std::move(truth), std::move(f)};
}

/// Random sentences with arbitrary (possibly contradictory) bounds on a
/// few of them.
inline BoundAssignment arbitrary_instance(Rng& rng, std::size_t width, std::size_t atom_count,
                                          std::size_t sentence_count, std::size_t depth = 3) {
  std::vector<std::string> atoms = atom_names(atom_count);
  BoundAssignment f(width);
  for (std::size_t s = 0; s < sentence_count; ++s) f.add(random_formula(rng, atoms, depth));
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (rng.below(3) != 0) continue;
    Incidence sup = random_incidence(rng, width);
    Incidence inf = sup & random_incidence(rng, width);
    f.raise_inf(i, inf);
    f.lower_sup(i, sup);
  }
  return f;
}

}  // namespace inccalc::fixtures
