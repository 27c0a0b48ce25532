#pragma once

// Line-oriented knowledge base files.
//
//   # comment
//   space <N>                      uniform space of N points
//   space weights w1 w2 ...        exact weights summing to 1
//   inc <name> = <bits | {set}>    exact incidence of an atom
//   bounds <name | (formula)> inf <bits | {set}> sup <bits | {set}>
//   formula <name> = <formula>     named sentence; later formulas may use the name
//   query prob <formula>
//   query cond <formula> given <formula>
//   query corr <formula> , <formula>

#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "inccalc/laf.hpp"

namespace inccalc {

struct BoundDeclaration {
  Formula sentence;
  Incidence inf;
  Incidence sup;
};

struct Query {
  enum class Kind { Prob, Cond, Corr };
  Kind kind;
  Formula first;
  std::optional<Formula> second;
  /// Rendering before named formulas are expanded.
  std::string label;
};

struct KnowledgeBase {
  SampleSpace space;
  std::vector<std::pair<std::string, Incidence>> exact;
  std::vector<BoundDeclaration> bounds;
  std::vector<std::pair<std::string, Formula>> definitions;
  std::vector<Query> queries;
  /// Every sentence mentioned, in file order, named formulas expanded.
  std::vector<Formula> sentences;

  Environment environment() const {
    Environment env;
    for (const auto& [name, inc] : exact) env.emplace(name, inc);
    return env;
  }

  const Formula* definition(const std::string& name) const {
    for (const auto& [n, f] : definitions)
      if (n == name) return &f;
    return nullptr;
  }

  /// Parses `text` and expands named formulas.
  Formula formula(std::string_view text) const {
    return substitute(parse_formula(text), [this](const std::string& n) { return definition(n); });
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

inline std::string render_label(const Formula& f) { return to_string(f); }

class KbParser {
 public:
  KnowledgeBase parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      std::string line = trim(raw);
      if (line.empty()) continue;
      try {
        directive(line);
      } catch (const ParseError& e) {
        throw ParseError("line " + std::to_string(line_) + ": " + e.what(), e.position());
      } catch (const Error& e) {
        throw Error("line " + std::to_string(line_) + ": " + e.what());
      }
    }
    if (!space_) throw Error("knowledge base declares no space");
    KnowledgeBase kb{*space_, std::move(exact_), std::move(bounds_), std::move(defs_), std::move(queries_),
                     std::move(sentences_)};
    return kb;
  }

 private:
  void directive(const std::string& line) {
    std::size_t sp = line.find_first_of(" \t");
    std::string keyword = line.substr(0, sp);
    std::string rest = sp == std::string::npos ? std::string() : trim(std::string_view(line).substr(sp));
    if (keyword == "space")
      space(rest);
    else if (keyword == "inc")
      incidence(rest);
    else if (keyword == "bounds")
      bounds(rest);
    else if (keyword == "formula")
      definition(rest);
    else if (keyword == "query")
      query(rest);
    else
      throw Error("unknown directive '" + keyword + "'");
  }

  void space(const std::string& rest) {
    if (space_) throw Error("duplicate space declaration");
    std::istringstream words(rest);
    std::string first;
    if (!(words >> first)) throw Error("expected 'space <N>' or 'space weights ...'");
    if (first == "weights") {
      std::vector<Rational> weights;
      std::string w;
      while (words >> w) weights.push_back(parse_rational(w));
      space_ = SampleSpace::weighted(std::move(weights));
      return;
    }
    std::string extra;
    if (words >> extra) throw Error("unexpected '" + extra + "' after space size");
    Rational n = parse_rational(first);
    if (denominator_of(n) != 1 || n < 1) throw Error("space size must be a positive integer");
    space_ = SampleSpace::uniform(numerator_of(n).convert_to<std::size_t>());
  }

  const SampleSpace& require_space() const {
    if (!space_) throw Error("space must be declared first");
    return *space_;
  }

  void require_fresh_name(const std::string& name) const {
    if (!Formula::is_identifier(name)) throw Error("invalid name '" + name + "'");
    for (const auto& [n, f] : defs_)
      if (n == name) throw Error("'" + name + "' is already a named formula");
  }

  Formula sentence(std::string_view text) const {
    return substitute(parse_formula(text), [this](const std::string& n) -> const Formula* {
      for (const auto& [name, f] : defs_)
        if (name == n) return &f;
      return nullptr;
    });
  }

  void incidence(const std::string& rest) {
    const SampleSpace& w = require_space();
    std::size_t eq = rest.find('=');
    if (eq == std::string::npos) throw Error("expected 'inc <name> = <incidence>'");
    std::string name = trim(std::string_view(rest).substr(0, eq));
    require_fresh_name(name);
    for (const auto& [n, i] : exact_)
      if (n == name) throw Error("duplicate incidence for '" + name + "'");
    Incidence inc = parse_incidence(trim(std::string_view(rest).substr(eq + 1)), w.size());
    exact_.emplace_back(name, std::move(inc));
    sentences_.push_back(Formula::atom(name));
  }

  void bounds(const std::string& rest) {
    const SampleSpace& w = require_space();
    std::size_t end = 0;
    std::string target;
    if (!rest.empty() && rest[0] == '(') {
      int depth = 0;
      for (; end < rest.size(); ++end) {
        if (rest[end] == '(') ++depth;
        if (rest[end] == ')' && --depth == 0) break;
      }
      if (end == rest.size()) throw Error("unbalanced parentheses in bounds target");
      target = rest.substr(1, end - 1);
      ++end;
    } else {
      end = rest.find_first_of(" \t");
      if (end == std::string::npos) throw Error("expected 'bounds <sentence> inf <incidence> sup <incidence>'");
      target = rest.substr(0, end);
    }
    std::string tail = trim(std::string_view(rest).substr(end));
    std::size_t sup_at = tail.rfind("sup");
    if (tail.rfind("inf", 0) != 0 || sup_at == std::string::npos)
      throw Error("expected 'inf <incidence> sup <incidence>' after bounds target");
    Formula f = sentence(target);
    Incidence inf = parse_incidence(trim(std::string_view(tail).substr(3, sup_at - 3)), w.size());
    Incidence sup = parse_incidence(trim(std::string_view(tail).substr(sup_at + 3)), w.size());
    bounds_.push_back({f, std::move(inf), std::move(sup)});
    sentences_.push_back(f);
  }

  void definition(const std::string& rest) {
    std::size_t eq = rest.find('=');
    if (eq == std::string::npos) throw Error("expected 'formula <name> = <formula>'");
    std::string name = trim(std::string_view(rest).substr(0, eq));
    require_fresh_name(name);
    for (const auto& [n, i] : exact_)
      if (n == name) throw Error("'" + name + "' already has an incidence");
    Formula body = sentence(std::string_view(rest).substr(eq + 1));
    if (body.atoms().count(name)) throw Error("named formula '" + name + "' refers to itself");
    defs_.emplace_back(name, body);
    sentences_.push_back(body);
  }

  void query(const std::string& rest) {
    std::size_t sp = rest.find_first_of(" \t");
    std::string kind = rest.substr(0, sp);
    std::string body = sp == std::string::npos ? std::string() : trim(std::string_view(rest).substr(sp));
    Query q{Query::Kind::Prob, Formula::truth(), std::nullopt, {}};
    auto two = [&](std::string_view sep, Query::Kind k) {
      std::size_t at = body.find(sep);
      if (at == std::string::npos) throw Error("expected '" + trim(sep) + "' in query");
      std::string lhs = body.substr(0, at);
      std::string rhs = body.substr(at + sep.size());
      q.kind = k;
      q.first = sentence(lhs);
      q.second = sentence(rhs);
      q.label = render_label(parse_formula(lhs)) + std::string(sep) + render_label(parse_formula(rhs));
    };
    if (kind == "prob") {
      q.first = sentence(body);
      q.label = render_label(parse_formula(body));
    } else if (kind == "cond") {
      two(" given ", Query::Kind::Cond);
    } else if (kind == "corr") {
      std::size_t comma = body.find(',');
      if (comma != std::string::npos) body = trim(std::string_view(body).substr(0, comma)) + " , " +
                                             trim(std::string_view(body).substr(comma + 1));
      two(" , ", Query::Kind::Corr);
    } else {
      throw Error("unknown query kind '" + kind + "'");
    }
    sentences_.push_back(q.first);
    if (q.second) sentences_.push_back(*q.second);
    queries_.push_back(std::move(q));
  }

  std::size_t line_ = 0;
  std::optional<SampleSpace> space_;
  std::vector<std::pair<std::string, Incidence>> exact_;
  std::vector<BoundDeclaration> bounds_;
  std::vector<std::pair<std::string, Formula>> defs_;
  std::vector<Query> queries_;
  std::vector<Formula> sentences_;
};

}  // namespace detail

inline KnowledgeBase parse_kb(std::string_view text) { return detail::KbParser().parse(text); }

/// Registers every sentence of the knowledge base (subformulas included)
/// with vacuous bounds, then narrows them by the declarations: exact
/// incidences set inf = sup = i, bounds set the given pair. Repeated
/// declarations for one sentence are combined, lower bounds by union and
/// upper bounds by intersection. Inconsistent input is left in place for
/// `propagate` to report.
inline BoundAssignment init_assignment(const KnowledgeBase& kb) {
  BoundAssignment f(kb.space.size());
  for (const Formula& s : kb.sentences) f.add(s);
  for (const auto& [name, inc] : kb.exact) {
    std::size_t i = f.index_of(Formula::atom(name));
    f.raise_inf(i, inc);
    f.lower_sup(i, inc);
  }
  for (const BoundDeclaration& b : kb.bounds) {
    std::size_t i = f.index_of(b.sentence);
    f.raise_inf(i, b.inf);
    f.lower_sup(i, b.sup);
  }
  return f;
}

/// Whether every atom of `f` has an exact incidence in the knowledge base.
inline bool fully_determined(const Formula& f, const KnowledgeBase& kb) {
  Environment env = kb.environment();
  for (const std::string& a : f.atoms())
    if (!env.count(a)) return false;
  return true;
}

/// Result of one query: `text` holds the line to print; `error` is set
/// when the query is undefined on this knowledge base.
struct QueryAnswer {
  std::string text;
  bool error = false;
};

/// Answers every query in file order. Probability queries over atoms
/// without exact incidences are answered with the interval given by the
/// propagated bounds in `solved`.
inline std::vector<QueryAnswer> answer_queries(const KnowledgeBase& kb, const BoundAssignment& solved) {
  std::vector<QueryAnswer> out;
  Environment env = kb.environment();
  for (const Query& q : kb.queries) {
    QueryAnswer a;
    try {
      switch (q.kind) {
        case Query::Kind::Prob:
          a.text = "prob " + q.label + " = ";
          if (fully_determined(q.first, kb))
            a.text += format_probability(prob(q.first, env, kb.space));
          else
            a.text += format_interval(prob_interval(q.first, solved, kb.space));
          break;
        case Query::Kind::Cond:
          a.text = "cond " + q.label + " = ";
          a.text += format_probability(cond_prob(q.first, *q.second, env, kb.space));
          break;
        case Query::Kind::Corr: {
          a.text = "corr " + q.label + " = ";
          Correlation c = correlation(q.first, *q.second, env, kb.space);
          a.text += c.decimal() + " (c^2 = " + to_fraction(c.squared()) + ")";
          break;
        }
      }
    } catch (const Error& e) {
      a.text += std::string("error: ") + e.what();
      a.error = true;
    }
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace inccalc
