#pragma once

// Propositional sentences: AST, concrete syntax parser and printer.
//
// Grammar (lowest to highest precedence):
//   implication := disjunction [ "->" implication ]        right-assoc
//   disjunction := conjunction { "|" conjunction }         left-assoc
//   conjunction := negation { "&" negation }               left-assoc
//   negation    := "~" negation | primary
//   primary     := "true" | "false" | identifier | "(" implication ")"
// Identifiers start with a letter and continue with letters, digits or '_'.

#include <cctype>
#include <cstddef>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "inccalc/error.hpp"

namespace inccalc {

enum class Connective { True, False, Atom, Not, And, Or, Implies };

/// Immutable propositional formula. Copies share structure.
class Formula {
 public:
  static Formula truth() { return Formula(std::make_shared<Node>(Node{Connective::True, {}, {}, {}})); }
  static Formula falsity() { return Formula(std::make_shared<Node>(Node{Connective::False, {}, {}, {}})); }

  static Formula atom(std::string name) {
    if (!is_identifier(name)) throw Error("invalid atom name '" + name + "'");
    return Formula(std::make_shared<Node>(Node{Connective::Atom, std::move(name), {}, {}}));
  }

  static Formula negation(Formula f) {
    return Formula(std::make_shared<Node>(Node{Connective::Not, {}, std::move(f.node_), {}}));
  }
  static Formula conjunction(Formula a, Formula b) { return binary(Connective::And, std::move(a), std::move(b)); }
  static Formula disjunction(Formula a, Formula b) { return binary(Connective::Or, std::move(a), std::move(b)); }
  static Formula implication(Formula a, Formula b) { return binary(Connective::Implies, std::move(a), std::move(b)); }

  Connective kind() const noexcept { return node_->kind; }
  bool is_atom() const noexcept { return kind() == Connective::Atom; }
  bool is_binary() const noexcept {
    return kind() == Connective::And || kind() == Connective::Or || kind() == Connective::Implies;
  }

  const std::string& name() const {
    if (!is_atom()) throw Error("formula is not an atom");
    return node_->name;
  }

  /// Operand of a negation, or left operand of a binary connective.
  Formula lhs() const {
    if (!node_->lhs) throw Error("formula has no operands");
    return Formula(node_->lhs);
  }
  Formula rhs() const {
    if (!node_->rhs) throw Error("formula has no right operand");
    return Formula(node_->rhs);
  }

  friend bool operator==(const Formula& a, const Formula& b) { return equal(a.node_.get(), b.node_.get()); }

  /// Atom names occurring in the formula, sorted.
  std::set<std::string> atoms() const {
    std::set<std::string> out;
    collect_atoms(node_.get(), out);
    return out;
  }

  std::size_t depth() const { return depth_of(node_.get()); }

  static bool is_identifier(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return s != "true" && s != "false";
  }

 private:
  struct Node {
    Connective kind;
    std::string name;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static Formula binary(Connective kind, Formula a, Formula b) {
    return Formula(std::make_shared<Node>(Node{kind, {}, std::move(a.node_), std::move(b.node_)}));
  }

  static bool equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    if (a->kind == Connective::Atom) return a->name == b->name;
    return equal(a->lhs.get(), b->lhs.get()) && equal(a->rhs.get(), b->rhs.get());
  }

  static void collect_atoms(const Node* n, std::set<std::string>& out) {
    if (!n) return;
    if (n->kind == Connective::Atom) out.insert(n->name);
    collect_atoms(n->lhs.get(), out);
    collect_atoms(n->rhs.get(), out);
  }

  static std::size_t depth_of(const Node* n) {
    if (!n) return 0;
    return 1 + std::max(depth_of(n->lhs.get()), depth_of(n->rhs.get()));
  }

  std::shared_ptr<const Node> node_;
};

namespace detail {

inline int precedence(Connective c) {
  switch (c) {
    case Connective::Implies: return 1;
    case Connective::Or: return 2;
    case Connective::And: return 3;
    case Connective::Not: return 4;
    default: return 5;
  }
}

inline const char* symbol(Connective c) {
  switch (c) {
    case Connective::And: return " & ";
    case Connective::Or: return " | ";
    case Connective::Implies: return " -> ";
    default: return "";
  }
}

inline void print_into(const Formula& f, std::string& out) {
  auto child = [&](const Formula& sub, bool parenthesize) {
    if (parenthesize) out += '(';
    print_into(sub, out);
    if (parenthesize) out += ')';
  };
  switch (f.kind()) {
    case Connective::True: out += "true"; return;
    case Connective::False: out += "false"; return;
    case Connective::Atom: out += f.name(); return;
    case Connective::Not:
      out += '~';
      child(f.lhs(), precedence(f.lhs().kind()) < precedence(Connective::Not));
      return;
    case Connective::And:
    case Connective::Or:
    case Connective::Implies: {
      int p = precedence(f.kind());
      bool right_assoc = f.kind() == Connective::Implies;
      int lp = precedence(f.lhs().kind());
      int rp = precedence(f.rhs().kind());
      child(f.lhs(), right_assoc ? lp <= p : lp < p);
      out += symbol(f.kind());
      child(f.rhs(), right_assoc ? rp < p : rp <= p);
      return;
    }
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse() {
    Formula f = implication();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return f;
  }

 private:
  Formula implication() {
    Formula lhs = disjunction();
    if (consume("->")) return Formula::implication(lhs, implication());
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (consume("|")) f = Formula::disjunction(f, conjunction());
    return f;
  }

  Formula conjunction() {
    Formula f = negation();
    while (consume("&")) f = Formula::conjunction(f, negation());
    return f;
  }

  Formula negation() {
    if (consume("~")) return Formula::negation(negation());
    return primary();
  }

  Formula primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of formula", pos_);
    if (consume("(")) {
      Formula f = implication();
      if (!consume(")")) throw ParseError("expected ')'", pos_);
      return f;
    }
    if (!std::isalpha(static_cast<unsigned char>(text_[pos_])))
      throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string word(text_.substr(start, pos_ - start));
    if (word == "true") return Formula::truth();
    if (word == "false") return Formula::falsity();
    return Formula::atom(std::move(word));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(std::string_view token) {
    skip_ws();
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Formula parse_formula(std::string_view text) { return detail::Parser(text).parse(); }

/// Minimal-parenthesis rendering; `parse_formula(to_string(f)) == f`.
inline std::string to_string(const Formula& f) {
  std::string out;
  detail::print_into(f, out);
  return out;
}

/// Replaces every atom for which `lookup` returns a body by that body.
inline Formula substitute(const Formula& f,
                          const std::function<const Formula*(const std::string&)>& lookup) {
  switch (f.kind()) {
    case Connective::True:
    case Connective::False: return f;
    case Connective::Atom: {
      const Formula* body = lookup(f.name());
      return body ? *body : f;
    }
    case Connective::Not: return Formula::negation(substitute(f.lhs(), lookup));
    case Connective::And: return Formula::conjunction(substitute(f.lhs(), lookup), substitute(f.rhs(), lookup));
    case Connective::Or: return Formula::disjunction(substitute(f.lhs(), lookup), substitute(f.rhs(), lookup));
    case Connective::Implies: return Formula::implication(substitute(f.lhs(), lookup), substitute(f.rhs(), lookup));
  }
  return f;
}

}  // namespace inccalc

template <>
struct std::hash<inccalc::Formula> {
  std::size_t operator()(const inccalc::Formula& f) const { return std::hash<std::string>{}(inccalc::to_string(f)); }
};
