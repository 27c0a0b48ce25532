#pragma once

// Legal Assignment Finder: propagation of lower (inf) and upper (sup)
// incidence bounds through connective-indexed rules until a fixpoint,
// with eager inconsistency detection and an optional case-splitting
// refinement that makes the bounds exact.

#include <algorithm>
#include <array>
#include <cstddef>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "inccalc/evaluate.hpp"
#include "inccalc/probability.hpp"
#include "inccalc/random.hpp"

namespace inccalc {

/// Lower and upper bound on a sentence's incidence: inf <= i(S) <= sup.
struct Bounds {
  Incidence inf;
  Incidence sup;

  bool consistent() const { return inf.subset_of(sup); }
  bool exact() const { return inf == sup; }
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// Sentences keyed by structural identity, closed under subformulas,
/// in registration order. Subformulas are registered before the
/// sentences that contain them.
class BoundAssignment {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  explicit BoundAssignment(std::size_t width) : width_(width) {}

  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Registers `f` and its subformulas with vacuous bounds ({}, w) unless
  /// already present. Returns the index of `f`.
  std::size_t add(const Formula& f) {
    if (auto found = find(f)) return *found;
    std::size_t lhs = npos;
    std::size_t rhs = npos;
    if (f.kind() == Connective::Not || f.is_binary()) lhs = add(f.lhs());
    if (f.is_binary()) rhs = add(f.rhs());
    std::size_t index = entries_.size();
    entries_.push_back(Entry{f, lhs, rhs, Bounds{Incidence(width_), Incidence::full(width_)}, {}});
    if (lhs != npos) entries_[lhs].parents.push_back(index);
    if (rhs != npos && rhs != lhs) entries_[rhs].parents.push_back(index);
    index_.emplace(to_string(f), index);
    return index;
  }

  std::optional<std::size_t> find(const Formula& f) const {
    auto it = index_.find(to_string(f));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t index_of(const Formula& f) const {
    auto found = find(f);
    if (!found) throw Error("unknown sentence '" + to_string(f) + "'");
    return *found;
  }

  const Formula& sentence(std::size_t i) const { return entries_.at(i).formula; }
  const Bounds& bounds(std::size_t i) const { return entries_.at(i).bounds; }
  const Bounds& bounds(const Formula& f) const { return bounds(index_of(f)); }

  /// Operand indices (npos when absent).
  std::size_t lhs(std::size_t i) const { return entries_.at(i).lhs; }
  std::size_t rhs(std::size_t i) const { return entries_.at(i).rhs; }
  const std::vector<std::size_t>& parents(std::size_t i) const { return entries_.at(i).parents; }

  /// Grows inf by `lower`; returns true on a strict change.
  bool raise_inf(std::size_t i, const Incidence& lower) {
    Incidence& inf = entries_.at(i).bounds.inf;
    Incidence next = inf | lower;
    if (next == inf) return false;
    inf = std::move(next);
    return true;
  }

  /// Shrinks sup to its intersection with `upper`; returns true on a strict change.
  bool lower_sup(std::size_t i, const Incidence& upper) {
    Incidence& sup = entries_.at(i).bounds.sup;
    Incidence next = sup & upper;
    if (next == sup) return false;
    sup = std::move(next);
    return true;
  }

  /// Atom sentences in registration order.
  std::vector<std::size_t> atom_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < entries_.size(); ++i)
      if (entries_[i].formula.is_atom()) out.push_back(i);
    return out;
  }

  friend bool operator==(const BoundAssignment& a, const BoundAssignment& b) {
    if (a.width_ != b.width_ || a.entries_.size() != b.entries_.size()) return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i)
      if (!(a.entries_[i].formula == b.entries_[i].formula) || a.entries_[i].bounds != b.entries_[i].bounds)
        return false;
    return true;
  }

 private:
  struct Entry {
    Formula formula;
    std::size_t lhs;
    std::size_t rhs;
    Bounds bounds;
    std::vector<std::size_t> parents;
  };

  std::size_t width_;
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Rule catalog
//
// For a compound sentence C with operands A (and B), each rule computes a
// candidate set from the current bounds and either grows one inf by union
// or shrinks one sup by intersection. Each justification shows that the
// candidate contains (for inf: is contained in) the true incidence.
// ---------------------------------------------------------------------------

enum class RuleTarget { Conclusion, Left, Right };
enum class BoundKind { Inf, Sup };

/// Current bounds of a rule's conclusion C and operands A, B. `b` is null
/// for negation.
struct RuleInputs {
  const Bounds& c;
  const Bounds& a;
  const Bounds* b;
};

struct Rule {
  std::string_view name;
  Connective connective;
  RuleTarget target;
  BoundKind bound;
  Incidence (*candidate)(const RuleInputs&);
};

namespace rules {

// C = ~A
// Not1: inf(C) u= w\sup(A)   since i(A) <= sup(A) gives w\sup(A) <= w\i(A) = i(C).
inline Incidence not1(const RuleInputs& r) { return ~r.a.sup; }
// Not2: sup(C) n= w\inf(A)   since inf(A) <= i(A) gives i(C) = w\i(A) <= w\inf(A).
inline Incidence not2(const RuleInputs& r) { return ~r.a.inf; }
// Not3: inf(A) u= w\sup(C)   since i(A) = w\i(C) and i(C) <= sup(C).
inline Incidence not3(const RuleInputs& r) { return ~r.c.sup; }
// Not4: sup(A) n= w\inf(C)   since i(A) = w\i(C) and inf(C) <= i(C).
inline Incidence not4(const RuleInputs& r) { return ~r.c.inf; }

// C = A & B
// And1: sup(A) n= sup(C) u w\inf(B)   since i(A) <= i(A&B) u w\i(B) <= sup(C) u w\inf(B).
inline Incidence and1(const RuleInputs& r) { return r.c.sup | ~r.b->inf; }
// And2: sup(B) n= sup(C) u w\inf(A)   mirror of And1.
inline Incidence and2(const RuleInputs& r) { return r.c.sup | ~r.a.inf; }
// And3: inf(A) u= inf(C)              since inf(C) <= i(A) n i(B) <= i(A).
inline Incidence and3(const RuleInputs& r) { return r.c.inf; }
// And4: inf(B) u= inf(C)              since inf(C) <= i(A) n i(B) <= i(B).
inline Incidence and4(const RuleInputs& r) { return r.c.inf; }
// And5: inf(C) u= inf(A) n inf(B)     since inf(A) n inf(B) <= i(A) n i(B) = i(C).
inline Incidence and5(const RuleInputs& r) { return r.a.inf & r.b->inf; }
// And6: sup(C) n= sup(A) n sup(B)     since i(C) = i(A) n i(B) <= sup(A) n sup(B).
inline Incidence and6(const RuleInputs& r) { return r.a.sup & r.b->sup; }

// C = A | B
// Or1: inf(A) u= inf(C) n w\sup(B)    since i(C) \ i(B) <= i(A) and inf(C)\sup(B) <= i(C)\i(B).
inline Incidence or1(const RuleInputs& r) { return r.c.inf & ~r.b->sup; }
// Or2: inf(B) u= inf(C) n w\sup(A)    mirror of Or1.
inline Incidence or2(const RuleInputs& r) { return r.c.inf & ~r.a.sup; }
// Or3: sup(A) n= sup(C)               since i(A) <= i(A) u i(B) = i(C).
inline Incidence or3(const RuleInputs& r) { return r.c.sup; }
// Or4: sup(B) n= sup(C)               since i(B) <= i(C).
inline Incidence or4(const RuleInputs& r) { return r.c.sup; }
// Or5: inf(C) u= inf(A) u inf(B)      since inf(A) u inf(B) <= i(A) u i(B) = i(C).
inline Incidence or5(const RuleInputs& r) { return r.a.inf | r.b->inf; }
// Or6: sup(C) n= sup(A) u sup(B)      since i(C) = i(A) u i(B) <= sup(A) u sup(B).
inline Incidence or6(const RuleInputs& r) { return r.a.sup | r.b->sup; }

// C = A -> B, i(C) = w\i(A) u i(B)
// Imp1: inf(B) u= inf(C) n inf(A)     modus ponens: i(C) n i(A) <= i(B).
inline Incidence imp1(const RuleInputs& r) { return r.c.inf & r.a.inf; }
// Imp2: sup(B) n= sup(C)              since i(B) <= i(C).
inline Incidence imp2(const RuleInputs& r) { return r.c.sup; }
// Imp3: inf(A) u= w\sup(C)            since w\i(A) <= i(C) gives w\sup(C) <= w\i(C) <= i(A).
inline Incidence imp3(const RuleInputs& r) { return ~r.c.sup; }
// Imp4: sup(A) n= w\inf(C) u sup(B)   since i(A) \ i(B) lies outside i(C).
inline Incidence imp4(const RuleInputs& r) { return ~r.c.inf | r.b->sup; }
// Imp5: inf(C) u= w\sup(A) u inf(B)   since w\sup(A) <= w\i(A) and inf(B) <= i(B).
inline Incidence imp5(const RuleInputs& r) { return ~r.a.sup | r.b->inf; }
// Imp6: sup(C) n= w\inf(A) u sup(B)   since w\i(A) <= w\inf(A) and i(B) <= sup(B).
inline Incidence imp6(const RuleInputs& r) { return ~r.a.inf | r.b->sup; }

}  // namespace rules

/// The 22 rules: 4 for negation, 6 each for conjunction, disjunction and
/// implication.
inline const std::array<Rule, 22>& rule_catalog() {
  using C = Connective;
  using T = RuleTarget;
  using K = BoundKind;
  static const std::array<Rule, 22> catalog{{
      {"Not1", C::Not, T::Conclusion, K::Inf, rules::not1},
      {"Not2", C::Not, T::Conclusion, K::Sup, rules::not2},
      {"Not3", C::Not, T::Left, K::Inf, rules::not3},
      {"Not4", C::Not, T::Left, K::Sup, rules::not4},
      {"And1", C::And, T::Left, K::Sup, rules::and1},
      {"And2", C::And, T::Right, K::Sup, rules::and2},
      {"And3", C::And, T::Left, K::Inf, rules::and3},
      {"And4", C::And, T::Right, K::Inf, rules::and4},
      {"And5", C::And, T::Conclusion, K::Inf, rules::and5},
      {"And6", C::And, T::Conclusion, K::Sup, rules::and6},
      {"Or1", C::Or, T::Left, K::Inf, rules::or1},
      {"Or2", C::Or, T::Right, K::Inf, rules::or2},
      {"Or3", C::Or, T::Left, K::Sup, rules::or3},
      {"Or4", C::Or, T::Right, K::Sup, rules::or4},
      {"Or5", C::Or, T::Conclusion, K::Inf, rules::or5},
      {"Or6", C::Or, T::Conclusion, K::Sup, rules::or6},
      {"Imp1", C::Implies, T::Right, K::Inf, rules::imp1},
      {"Imp2", C::Implies, T::Right, K::Sup, rules::imp2},
      {"Imp3", C::Implies, T::Left, K::Inf, rules::imp3},
      {"Imp4", C::Implies, T::Left, K::Sup, rules::imp4},
      {"Imp5", C::Implies, T::Conclusion, K::Inf, rules::imp5},
      {"Imp6", C::Implies, T::Conclusion, K::Sup, rules::imp6},
  }};
  return catalog;
}

/// Rules whose conclusion has the given connective, in catalog order.
inline std::span<const Rule> rules_for(Connective c) {
  const auto& all = rule_catalog();
  switch (c) {
    case Connective::Not: return {all.data(), 4};
    case Connective::And: return {all.data() + 4, 6};
    case Connective::Or: return {all.data() + 10, 6};
    case Connective::Implies: return {all.data() + 16, 6};
    default: return {};
  }
}

/// Applies `rule` to the bounds in place; returns true on a strict change.
inline bool apply_rule(const Rule& rule, Bounds& c, Bounds& a, Bounds* b) {
  Incidence cand = rule.candidate(RuleInputs{c, a, b});
  Bounds* target = rule.target == RuleTarget::Conclusion ? &c : (rule.target == RuleTarget::Left ? &a : b);
  if (rule.bound == BoundKind::Inf) {
    Incidence next = target->inf | cand;
    if (next == target->inf) return false;
    target->inf = std::move(next);
  } else {
    Incidence next = target->sup & cand;
    if (next == target->sup) return false;
    target->sup = std::move(next);
  }
  return true;
}

// ---------------------------------------------------------------------------
// Consistency and amalgamation
// ---------------------------------------------------------------------------

/// Index of the first sentence (registration order) with inf not within
/// sup, or nullopt when every sentence is consistent.
inline std::optional<std::size_t> check_consistency(const BoundAssignment& f) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!f.bounds(i).consistent()) return i;
  return std::nullopt;
}

/// Union of lower bounds obtained from separate derivations of one
/// sentence: each is within the true incidence, hence so is the union.
inline Incidence amalgamate_lower_bounds(std::span<const Incidence> bounds, std::size_t width) {
  Incidence out(width);
  for (const Incidence& l : bounds) out |= l;
  return out;
}

inline Incidence amalgamate_lower_bounds(std::span<const Incidence> bounds) {
  if (bounds.empty()) return Incidence();
  return amalgamate_lower_bounds(bounds, bounds.front().width());
}

// ---------------------------------------------------------------------------
// Propagation
// ---------------------------------------------------------------------------

enum class PropagationMode { Fixpoint, Complete };

struct PropagateOptions {
  PropagationMode mode = PropagationMode::Fixpoint;
  /// When set, worklist picks and rule order within a sentence are
  /// randomised with this seed. The fixpoint does not depend on it.
  std::optional<std::uint64_t> shuffle_seed;
  /// Complete mode refuses assignments with more atoms than this.
  std::size_t max_complete_atoms = 24;
  /// Called after every strict bound change with the sentence index and
  /// its bounds before and after.
  std::function<void(std::size_t, const Bounds&, const Bounds&)> observer;
};

struct PropagationOutcome {
  enum class Status { Fixpoint, Inconsistent };

  Status status = Status::Fixpoint;
  /// Offending sentence when inconsistent.
  std::size_t culprit = BoundAssignment::npos;
  BoundAssignment final;
  /// Number of strict bound changes.
  std::size_t steps = 0;

  bool consistent() const noexcept { return status == Status::Fixpoint; }
};

namespace detail {

class Propagator {
 public:
  Propagator(BoundAssignment& f, const PropagateOptions& opts) : f_(f), opts_(opts), queued_(f.size(), false) {
    if (opts.shuffle_seed) rng_.emplace(*opts.shuffle_seed);
  }

  void enqueue(std::size_t i) {
    if (queued_[i]) return;
    queued_[i] = true;
    pending_.push_back(i);
  }

  void enqueue_all() {
    for (std::size_t i = 0; i < f_.size(); ++i) enqueue(i);
  }

  /// Runs to a fixpoint. Returns the offending sentence on inconsistency.
  std::optional<std::size_t> run(std::size_t& steps) {
    std::vector<std::size_t> changed;
    while (!pending_.empty()) {
      std::size_t s = pop();
      changed.clear();
      apply_sentence(s, changed, steps);
      if (changed.empty()) continue;
      std::sort(changed.begin(), changed.end());
      changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
      for (std::size_t i : changed)
        if (!f_.bounds(i).consistent()) return i;
      for (std::size_t i : changed) {
        enqueue(i);
        for (std::size_t p : f_.parents(i)) enqueue(p);
      }
    }
    return std::nullopt;
  }

 private:
  std::size_t pop() {
    std::size_t at = rng_ ? static_cast<std::size_t>(rng_->below(pending_.size())) : 0;
    std::size_t s = pending_[at];
    if (rng_) {
      pending_[at] = pending_.back();
      pending_.pop_back();
    } else {
      pending_.pop_front();
    }
    queued_[s] = false;
    return s;
  }

  void note(std::size_t i, const Bounds& before, std::vector<std::size_t>& changed, std::size_t& steps) {
    ++steps;
    changed.push_back(i);
    if (opts_.observer) opts_.observer(i, before, f_.bounds(i));
  }

  void apply_sentence(std::size_t s, std::vector<std::size_t>& changed, std::size_t& steps) {
    const Formula& sentence = f_.sentence(s);
    switch (sentence.kind()) {
      case Connective::True: {
        Bounds before = f_.bounds(s);
        if (f_.raise_inf(s, Incidence::full(f_.width()))) note(s, before, changed, steps);
        return;
      }
      case Connective::False: {
        Bounds before = f_.bounds(s);
        if (f_.lower_sup(s, Incidence(f_.width()))) note(s, before, changed, steps);
        return;
      }
      case Connective::Atom: return;
      default: break;
    }
    std::span<const Rule> rules = rules_for(sentence.kind());
    std::array<std::size_t, 6> order{0, 1, 2, 3, 4, 5};
    std::span<std::size_t> active(order.data(), rules.size());
    if (rng_) rng_->shuffle(active);
    std::size_t a = f_.lhs(s);
    std::size_t b = f_.rhs(s);
    for (std::size_t r : active) {
      const Rule& rule = rules[r];
      std::size_t target = rule.target == RuleTarget::Conclusion ? s : (rule.target == RuleTarget::Left ? a : b);
      Bounds bc = f_.bounds(s);
      Bounds ba = f_.bounds(a);
      std::optional<Bounds> bb;
      if (b != BoundAssignment::npos) bb = f_.bounds(b);
      Incidence cand = rule.candidate(RuleInputs{bc, ba, bb ? &*bb : nullptr});
      Bounds before = f_.bounds(target);
      bool strict = rule.bound == BoundKind::Inf ? f_.raise_inf(target, cand) : f_.lower_sup(target, cand);
      if (strict) note(target, before, changed, steps);
    }
  }

  BoundAssignment& f_;
  const PropagateOptions& opts_;
  std::deque<std::size_t> pending_;
  std::vector<bool> queued_;
  std::optional<Rng> rng_;
};

struct BranchResult {
  std::optional<BoundAssignment> assignment;  // nullopt when every branch is inconsistent
  std::size_t culprit = BoundAssignment::npos;
};

/// Propagates after tightening one bound of sentence `s` at point `p`.
inline std::optional<std::size_t> tighten_and_propagate(BoundAssignment& f, std::size_t s, std::size_t p,
                                                        bool member) {
  Incidence at(f.width());
  at.set(p);
  if (member)
    f.raise_inf(s, at);
  else
    f.lower_sup(s, ~at);
  if (!f.bounds(s).consistent()) return s;
  PropagateOptions inner;
  Propagator prop(f, inner);
  prop.enqueue(s);
  for (std::size_t q : f.parents(s)) prop.enqueue(q);
  std::size_t ignored = 0;
  return prop.run(ignored);
}

inline std::optional<std::size_t> undetermined_at(const BoundAssignment& f, std::size_t p,
                                                  const std::vector<std::size_t>& atoms) {
  auto open = [&](std::size_t i) { return f.bounds(i).sup.test(p) && !f.bounds(i).inf.test(p); };
  for (std::size_t i : atoms)
    if (open(i)) return i;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (open(i)) return i;
  return std::nullopt;
}

/// Case-splits every undetermined membership at point `p` of a consistent
/// fixpoint and combines the surviving branches: inf becomes the
/// intersection of branch infs, sup the union of branch sups. Rules act
/// pointwise, so columns other than `p` are unchanged by this.
inline BranchResult resolve_point(const BoundAssignment& f, std::size_t p, const std::vector<std::size_t>& atoms) {
  auto split = undetermined_at(f, p, atoms);
  if (!split) return {f, BoundAssignment::npos};
  std::size_t s = *split;
  BranchResult branches[2];
  for (int member = 0; member < 2; ++member) {
    BoundAssignment copy = f;
    if (auto bad = tighten_and_propagate(copy, s, p, member == 1)) {
      branches[member] = {std::nullopt, *bad};
      continue;
    }
    branches[member] = resolve_point(copy, p, atoms);
  }
  BranchResult& in = branches[1];
  BranchResult& out = branches[0];
  if (!in.assignment && !out.assignment) return {std::nullopt, in.culprit};
  if (!in.assignment) return out;
  if (!out.assignment) return in;
  BoundAssignment combined = f;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Bounds& x = in.assignment->bounds(i);
    const Bounds& y = out.assignment->bounds(i);
    combined.raise_inf(i, x.inf & y.inf);
    combined.lower_sup(i, x.sup | y.sup);
  }
  return {std::move(combined), BoundAssignment::npos};
}

}  // namespace detail

/// Specializes `initial` to the legal assignments it admits. Fixpoint mode
/// applies the rule catalog until nothing changes; complete mode then
/// case-splits each point to make every bound exact with respect to the
/// legal assignments.
inline PropagationOutcome propagate(BoundAssignment initial, const SampleSpace& w,
                                    const PropagateOptions& opts = {}) {
  if (initial.width() != w.size()) throw WidthMismatch(w.size(), initial.width());
  PropagationOutcome out{PropagationOutcome::Status::Fixpoint, BoundAssignment::npos, std::move(initial), 0};
  if (auto bad = check_consistency(out.final)) {
    out.status = PropagationOutcome::Status::Inconsistent;
    out.culprit = *bad;
    return out;
  }
  detail::Propagator prop(out.final, opts);
  prop.enqueue_all();
  if (auto bad = prop.run(out.steps)) {
    out.status = PropagationOutcome::Status::Inconsistent;
    out.culprit = *bad;
    return out;
  }
  if (opts.mode != PropagationMode::Complete) return out;

  std::vector<std::size_t> atoms = out.final.atom_indices();
  if (atoms.size() > opts.max_complete_atoms)
    throw InstanceTooLarge("complete propagation limited to " + std::to_string(opts.max_complete_atoms) +
                           " atoms, got " + std::to_string(atoms.size()));
  for (std::size_t p = 0; p < w.size(); ++p) {
    detail::BranchResult r = detail::resolve_point(out.final, p, atoms);
    if (!r.assignment) {
      out.status = PropagationOutcome::Status::Inconsistent;
      out.culprit = r.culprit;
      return out;
    }
    for (std::size_t i = 0; i < out.final.size(); ++i) {
      const Bounds& refined = r.assignment->bounds(i);
      Bounds before = out.final.bounds(i);
      bool strict = out.final.raise_inf(i, refined.inf);
      strict = out.final.lower_sup(i, refined.sup) || strict;
      if (strict) {
        ++out.steps;
        if (opts.observer) opts.observer(i, before, out.final.bounds(i));
      }
    }
  }
  return out;
}

/// [wp(inf(S)), wp(sup(S))].
inline ProbabilityInterval prob_interval(const Formula& sentence, const BoundAssignment& f, const SampleSpace& w) {
  const Bounds& b = f.bounds(sentence);
  return interval_of(b.inf, b.sup, w);
}

/// One line per sentence in registration order:
/// `<formula> inf=<bits> sup=<bits> p=[lo,hi]`.
inline std::string dump_assignment(const BoundAssignment& f, const SampleSpace& w) {
  std::string out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Bounds& b = f.bounds(i);
    out += to_string(f.sentence(i));
    out += " inf=" + encode_bitstring(b.inf);
    out += " sup=" + encode_bitstring(b.sup);
    out += " p=[" + to_fraction(wp(b.inf, w)) + "," + to_fraction(wp(b.sup, w)) + "]\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

/// Every assignment of exact incidences to the atoms under which each
/// sentence's evaluated incidence lies within its bounds in `f`.
/// Refuses instances with width * #atoms > `max_bits`.
inline std::vector<Environment> enumerate_legal(const BoundAssignment& f, const SampleSpace& w,
                                                std::size_t max_bits = 24) {
  std::vector<std::size_t> atoms = f.atom_indices();
  if (w.size() * atoms.size() > max_bits)
    throw InstanceTooLarge("enumeration limited to " + std::to_string(max_bits) + " bits of search, got " +
                           std::to_string(w.size() * atoms.size()));
  std::vector<Environment> legal;
  if (check_consistency(f)) return legal;

  // Each atom ranges over inf(a) plus any subset of sup(a) \ inf(a).
  std::vector<std::vector<std::size_t>> free(atoms.size());
  std::size_t free_bits = 0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const Bounds& b = f.bounds(atoms[k]);
    free[k] = (b.sup - b.inf).points();
    free_bits += free[k].size();
  }
  const std::uint64_t combos = std::uint64_t{1} << free_bits;
  for (std::uint64_t mask = 0; mask < combos; ++mask) {
    Environment env;
    std::uint64_t m = mask;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      Incidence value = f.bounds(atoms[k]).inf;
      for (std::size_t point : free[k]) {
        if (m & 1U) value.set(point);
        m >>= 1;
      }
      env.emplace(f.sentence(atoms[k]).name(), std::move(value));
    }
    bool ok = true;
    for (std::size_t i = 0; i < f.size() && ok; ++i) {
      if (f.sentence(i).is_atom()) continue;
      Incidence v = incidence_of(f.sentence(i), env, w);
      ok = f.bounds(i).inf.subset_of(v) && v.subset_of(f.bounds(i).sup);
    }
    if (ok) legal.push_back(std::move(env));
  }
  return legal;
}

/// Per-sentence tight bounds over a non-empty set of legal assignments:
/// inf = intersection, sup = union of the evaluated incidences.
inline std::vector<Bounds> tight_bounds(const BoundAssignment& f, const SampleSpace& w,
                                        std::span<const Environment> legal) {
  if (legal.empty()) throw Error("no legal assignments");
  std::vector<Bounds> out;
  out.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    Bounds b{w.full(), w.empty()};
    for (const Environment& env : legal) {
      Incidence v = incidence_of(f.sentence(i), env, w);
      b.inf &= v;
      b.sup |= v;
    }
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace inccalc
