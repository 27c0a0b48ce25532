#pragma once

// Building incidences: synthetically from target marginals and pairwise
// correlations, or objectively from tables of observed experiments.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "inccalc/evaluate.hpp"
#include "inccalc/random.hpp"

namespace inccalc {

/// A sample space with incidences for a set of atoms.
struct GeneratedModel {
  SampleSpace space;
  Environment env;
  /// Atom names in output order.
  std::vector<std::string> atoms;
};

// ---------------------------------------------------------------------------
// From probabilities and correlations
// ---------------------------------------------------------------------------

struct TargetSpec {
  std::map<std::string, Rational> marginals;
  /// Keyed by (first, second) with first < second.
  std::map<std::pair<std::string, std::string>, double> correlations;
  std::size_t size = 100;
  std::uint64_t seed = 0;

  void set_correlation(std::string a, std::string b, double c) {
    if (b < a) std::swap(a, b);
    correlations[{std::move(a), std::move(b)}] = c;
  }
};

/// round(p * size), halves rounded up.
inline std::size_t marginal_quota(const Rational& p, std::size_t size) {
  Rational scaled = p * static_cast<long long>(size) + Rational(1, 2);
  BigInt q = numerator_of(scaled) / denominator_of(scaled);
  return q.convert_to<std::size_t>();
}

/// Overlap count |i(a) n i(b)| implied by correlation `c` between atoms
/// holding `ka` and `kb` of `size` equally weighted points:
/// round(size * (pa pb + c sqrt(pa(1-pa) pb(1-pb)))).
inline long long target_overlap(std::size_t ka, std::size_t kb, std::size_t size, double c) {
  double n = static_cast<double>(size);
  double pa = static_cast<double>(ka) / n;
  double pb = static_cast<double>(kb) / n;
  double joint = pa * pb + c * std::sqrt(pa * (1 - pa) * pb * (1 - pb));
  return std::llround(joint * n);
}

namespace detail {

inline std::uint64_t partner_signature(std::size_t point, const std::vector<const Incidence*>& partners) {
  std::uint64_t sig = 0;
  for (std::size_t k = 0; k < partners.size() && k < 64; ++k)
    if (partners[k]->test(point)) sig |= std::uint64_t{1} << k;
  return sig;
}

/// Moves `count` members of `b` from points in `from` to points in `to`,
/// preferring moves that keep membership in earlier partners unchanged.
inline void move_members(Incidence& b, std::vector<std::size_t> from, std::vector<std::size_t> to, std::size_t count,
                         const std::vector<const Incidence*>& partners, Rng& rng) {
  rng.shuffle(std::span<std::size_t>(from));
  rng.shuffle(std::span<std::size_t>(to));
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
  for (std::size_t y : to) buckets[partner_signature(y, partners)].push_back(y);

  std::vector<bool> used_from(from.size(), false);
  std::size_t moved = 0;
  for (std::size_t i = 0; i < from.size() && moved < count; ++i) {
    auto& bucket = buckets[partner_signature(from[i], partners)];
    if (bucket.empty()) continue;
    b.set(from[i], false);
    b.set(bucket.back(), true);
    bucket.pop_back();
    used_from[i] = true;
    ++moved;
  }
  if (moved == count) return;
  std::vector<std::size_t> rest;
  for (std::size_t y : to)
    if (!b.test(y)) rest.push_back(y);
  std::size_t r = 0;
  for (std::size_t i = 0; i < from.size() && moved < count; ++i) {
    if (used_from[i]) continue;
    b.set(from[i], false);
    b.set(rest[r++], true);
    ++moved;
  }
}

}  // namespace detail

/// Uniform space of `spec.size` points. Each atom receives exactly
/// round(p * size) points; for every correlated pair (processed in lexical
/// order, adjusting the later atom) members are swapped until the overlap
/// equals the count implied by the target correlation. Deterministic for a
/// fixed seed.
inline GeneratedModel incidences_from_probabilities(const TargetSpec& spec) {
  if (spec.size == 0) throw Error("sample space size must be at least 1");
  const std::size_t n = spec.size;

  std::map<std::string, std::size_t> quota;
  for (const auto& [name, p] : spec.marginals) {
    if (!Formula::is_identifier(name)) throw Error("invalid atom name '" + name + "'");
    if (p < 0 || p > 1) throw InfeasibleTarget("marginal for '" + name + "' outside [0,1]");
    quota[name] = marginal_quota(p, n);
  }

  std::map<std::pair<std::string, std::string>, std::size_t> overlap;
  for (const auto& [pair, c] : spec.correlations) {
    const auto& [a, b] = pair;
    if (a == b) throw InfeasibleTarget("correlation of '" + a + "' with itself");
    for (const std::string* name : {&a, &b}) {
      auto it = spec.marginals.find(*name);
      if (it == spec.marginals.end()) throw InfeasibleTarget("correlation names atom '" + *name + "' with no marginal");
      if (it->second <= 0 || it->second >= 1)
        throw InfeasibleTarget("correlated atom '" + *name + "' needs a marginal strictly between 0 and 1");
      std::size_t k = quota.at(*name);
      if (k == 0 || k == n)
        throw InfeasibleTarget("marginal of '" + *name + "' quantizes to 0 or 1 at size " + std::to_string(n));
    }
    if (!(c >= -1.0 && c <= 1.0)) throw InfeasibleTarget("correlation outside [-1,1]");
    std::size_t ka = quota.at(a);
    std::size_t kb = quota.at(b);
    long long t = target_overlap(ka, kb, n, c);
    long long lo = std::max<long long>(0, static_cast<long long>(ka + kb) - static_cast<long long>(n));
    long long hi = static_cast<long long>(std::min(ka, kb));
    if (t < lo || t > hi)
      throw InfeasibleTarget("correlation " + std::to_string(c) + " between '" + a + "' and '" + b +
                             "' needs overlap " + std::to_string(t) + " outside [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]");
    overlap[pair] = static_cast<std::size_t>(t);
  }

  Rng rng(spec.seed);
  GeneratedModel out{SampleSpace::uniform(n), {}, {}};
  for (const auto& [name, k] : quota) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    rng.shuffle(std::span<std::size_t>(perm));
    Incidence inc(n);
    for (std::size_t i = 0; i < k; ++i) inc.set(perm[i]);

    std::vector<const Incidence*> partners;
    for (const std::string& earlier : out.atoms) {
      auto it = overlap.find({earlier, name});
      if (it == overlap.end()) continue;
      const Incidence& a = out.env.at(earlier);
      std::size_t current = (a & inc).count();
      std::size_t target = it->second;
      if (current < target)
        detail::move_members(inc, (inc - a).points(), (a - inc).points(), target - current, partners, rng);
      else if (current > target)
        detail::move_members(inc, (a & inc).points(), (~(a | inc)).points(), current - target, partners, rng);
      partners.push_back(&a);
    }
    out.env.emplace(name, std::move(inc));
    out.atoms.push_back(name);
  }
  return out;
}

/// Target file: one directive per line, `#` comments.
///   marginal <atom> <probability>
///   correlation <atom> <atom> <c>
inline TargetSpec parse_target_spec(std::string_view text) {
  TargetSpec spec;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string keyword;
    if (!(words >> keyword)) continue;
    auto fail = [&](const std::string& why) -> Error {
      return Error("line " + std::to_string(lineno) + ": " + why);
    };
    std::string extra;
    if (keyword == "marginal") {
      std::string name, value;
      if (!(words >> name >> value) || (words >> extra)) throw fail("expected 'marginal <atom> <p>'");
      if (!Formula::is_identifier(name)) throw fail("invalid atom name '" + name + "'");
      if (spec.marginals.count(name)) throw fail("duplicate marginal for '" + name + "'");
      try {
        spec.marginals[name] = parse_rational(value);
      } catch (const ParseError& e) {
        throw fail(e.what());
      }
    } else if (keyword == "correlation") {
      std::string a, b, value;
      if (!(words >> a >> b >> value) || (words >> extra)) throw fail("expected 'correlation <atom> <atom> <c>'");
      double c = 0;
      try {
        std::size_t used = 0;
        c = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        throw fail("invalid correlation '" + value + "'");
      }
      spec.set_correlation(a, b, c);
    } else {
      throw fail("unknown directive '" + keyword + "'");
    }
  }
  return spec;
}

// ---------------------------------------------------------------------------
// From observation records
// ---------------------------------------------------------------------------

/// Boolean observations; one column per atom, one row per experiment.
struct RecordTable {
  std::vector<std::string> columns;
  std::vector<std::vector<bool>> rows;
};

/// First line: comma-separated column names. Following lines: values in
/// {0,1,T,F,true,false}. Blank lines are skipped.
inline RecordTable parse_records(std::string_view text) {
  auto trim = [](std::string s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  auto split = [&](const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream cells(line);
    while (std::getline(cells, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
  };

  RecordTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells = split(trim(line));
    if (header) {
      table.columns = std::move(cells);
      header = false;
      continue;
    }
    if (cells.size() != table.columns.size())
      throw Error("line " + std::to_string(lineno) + ": expected " + std::to_string(table.columns.size()) +
                  " values, got " + std::to_string(cells.size()));
    std::vector<bool> row;
    for (const std::string& v : cells) {
      if (v == "1" || v == "T" || v == "true")
        row.push_back(true);
      else if (v == "0" || v == "F" || v == "false")
        row.push_back(false);
      else
        throw Error("line " + std::to_string(lineno) + ": invalid value '" + v + "'");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

/// One point per distinct row in first-occurrence order, weighted by the
/// fraction of rows identical to it. i(column) holds the points whose row
/// has that column true. Assumes the rows cover all the cases.
inline GeneratedModel incidences_from_records(const RecordTable& table) {
  if (table.columns.empty()) throw Error("record table has no columns");
  if (table.rows.empty()) throw Error("record table has no rows");
  std::set<std::string> seen;
  for (const std::string& c : table.columns) {
    if (!Formula::is_identifier(c)) throw Error("invalid column name '" + c + "'");
    if (!seen.insert(c).second) throw Error("duplicate column '" + c + "'");
  }

  std::vector<std::vector<bool>> distinct;
  std::vector<long long> counts;
  std::map<std::vector<bool>, std::size_t> index;
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw Error("record table is not rectangular");
    auto [it, inserted] = index.emplace(row, distinct.size());
    if (inserted) {
      distinct.push_back(row);
      counts.push_back(0);
    }
    ++counts[it->second];
  }

  const auto total = static_cast<long long>(table.rows.size());
  std::vector<Rational> weights;
  for (long long c : counts) weights.emplace_back(c, total);
  GeneratedModel out{SampleSpace::weighted(std::move(weights)), {}, table.columns};
  for (std::size_t col = 0; col < table.columns.size(); ++col) {
    Incidence inc(distinct.size());
    for (std::size_t p = 0; p < distinct.size(); ++p)
      if (distinct[p][col]) inc.set(p);
    out.env.emplace(table.columns[col], std::move(inc));
  }
  return out;
}

/// `space` and `inc` lines loadable as a knowledge base. Uniform spaces
/// are written by size unless `explicit_weights` is set.
inline std::string write_kb_fragment(const GeneratedModel& model, bool explicit_weights) {
  std::string out = "space";
  if (model.space.is_uniform() && !explicit_weights) {
    out += " " + std::to_string(model.space.size());
  } else {
    out += " weights";
    for (const Rational& w : model.space.weights()) out += " " + to_fraction(w);
  }
  out += "\n";
  for (const std::string& name : model.atoms) out += "inc " + name + " = " + encode_bitstring(model.env.at(name)) + "\n";
  return out;
}

}  // namespace inccalc
