// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

using namespace inccalc;
namespace fx = inccalc::fixtures;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

struct CommandResult {
  std::string out;
  int status;
};

CommandResult run_cli(const std::string& args) {
  std::string cmd = std::string("'") + INCCALC_CLI_PATH + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {"", -1};
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int raw = pclose(pipe);
  return {out, WIFEXITED(raw) ? WEXITSTATUS(raw) : -1};
}

std::string data_path(const std::string& name) { return std::string(INCCALC_TEST_DIR) + "/data/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool contains(const Bounds& outer, const Bounds& inner) {
  return outer.inf.subset_of(inner.inf) && inner.sup.subset_of(outer.sup);
}

Verdict truth_functional_oracle() {
  Rng rng(1001);
  auto start = std::chrono::steady_clock::now();
  int agree = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto atoms = fx::atom_names(1 + rng.below(6));
    Environment env = fx::random_environment(rng, atoms, 16);
    SampleSpace w = SampleSpace::uniform(16);
    Formula f = fx::random_formula(rng, atoms, 1 + rng.below(6));
    if (incidence_of(f, env, w) == fx::pointwise_incidence(f, env, 16)) ++agree;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream d;
  d << agree << "/1000 agree, " << secs << " s";
  return {agree == 1000 && secs < 5.0, d.str()};
}

Verdict probability_identities() {
  Rng rng(1002);
  auto atoms = fx::atom_names(4);
  int ok = 0;
  int chain_cases = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t width = 1 + rng.below(20);
    SampleSpace w = fx::random_space(rng, width);
    Environment env = fx::random_environment(rng, atoms, width);
    Formula a = fx::random_formula(rng, atoms, 4);
    Formula b = fx::random_formula(rng, atoms, 4);
    Rational pa = prob(a, env, w);
    Rational pb = prob(b, env, w);
    Rational pab = prob(Formula::conjunction(a, b), env, w);
    bool good = prob(Formula::negation(a), env, w) == 1 - pa &&
                prob(Formula::disjunction(a, b), env, w) == pa + pb - pab;
    if (pb > 0) {
      ++chain_cases;
      good = good && pab == cond_prob(a, b, env, w) * pb;
    }
    if (good) ++ok;
  }
  std::ostringstream d;
  d << ok << "/1000 exact, chain rule exercised on " << chain_cases;
  return {ok == 1000, d.str()};
}

Verdict correlation_formula() {
  Rng rng(1003);
  auto atoms = fx::atom_names(3);
  int cases = 0;
  int ok = 0;
  double worst = 0;
  while (cases < 500) {
    std::size_t width = 2 + rng.below(30);
    SampleSpace w = fx::random_space(rng, width);
    Environment env = fx::random_environment(rng, atoms, width);
    Formula a = fx::random_formula(rng, atoms, 3);
    Formula b = fx::random_formula(rng, atoms, 3);
    Rational pa = prob(a, env, w);
    Rational pb = prob(b, env, w);
    if (pa == 0 || pa == 1 || pb == 0 || pb == 1) continue;
    ++cases;
    Correlation c = correlation(a, b, env, w);
    double exact = prob(Formula::conjunction(a, b), env, w).convert_to<double>();
    double spread = std::sqrt((pa * (1 - pa) * pb * (1 - pb)).convert_to<double>());
    double rebuilt = (pa * pb).convert_to<double>() + c.value() * spread;
    double err = std::abs(rebuilt - exact);
    worst = std::max(worst, err);
    if (err <= 1e-6 && c.squared() <= 1) ++ok;
  }
  SampleSpace w = SampleSpace::uniform(10);
  Environment env{{"A", Incidence::range(10, 0, 4)}, {"B", Incidence::range(10, 0, 3)}};
  double worked = correlation(Formula::atom("A"), Formula::atom("B"), env, w).value();
  bool worked_ok = std::round(worked * 1e5) == 81650;
  std::ostringstream d;
  d << ok << "/500 within 1e-6 (worst " << worst << "), worked example " << std::fixed;
  d.precision(5);
  d << worked;
  return {ok == 500 && worked_ok, d.str()};
}

Verdict laf_soundness() {
  Rng rng(1004);
  int ok = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t width = 1 + rng.below(10);
    std::size_t atoms = 1 + rng.below(4);
    std::size_t sentences = 1 + rng.below(10);
    fx::Instance inst = fx::sound_instance(rng, width, atoms, sentences);
    PropagationOutcome out = propagate(inst.initial, inst.space);
    if (!out.consistent()) continue;
    bool within = true;
    for (std::size_t i = 0; i < out.final.size() && within; ++i) {
      Incidence truth = incidence_of(out.final.sentence(i), inst.truth, inst.space);
      within = out.final.bounds(i).inf.subset_of(truth) && truth.subset_of(out.final.bounds(i).sup);
    }
    if (within) ++ok;
  }
  std::ostringstream d;
  d << ok << "/500 consistent with ground truth inside final bounds";
  return {ok == 500, d.str()};
}

Verdict laf_tightness() {
  Rng rng(1005);
  PropagateOptions complete;
  complete.mode = PropagationMode::Complete;
  int examined = 0;
  int failures = 0;
  int with_legal = 0;
  int gaps = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t width = 1 + rng.below(4);
    std::size_t atoms = 1 + rng.below(3);
    std::size_t sentences = 1 + rng.below(5);
    BoundAssignment initial = trial % 2 == 0 ? fx::sound_instance(rng, width, atoms, sentences).initial
                                             : fx::arbitrary_instance(rng, width, atoms, sentences);
    SampleSpace w = SampleSpace::uniform(width);
    ++examined;
    std::vector<Environment> legal = enumerate_legal(initial, w);
    PropagationOutcome plain = propagate(initial, w);
    PropagationOutcome full = propagate(initial, w, complete);
    if (legal.empty()) {
      if (full.consistent()) ++failures;
      continue;
    }
    ++with_legal;
    if (!plain.consistent() || !full.consistent()) {
      ++failures;
      continue;
    }
    std::vector<Bounds> tight = tight_bounds(initial, w, legal);
    bool gap = false;
    for (std::size_t i = 0; i < initial.size(); ++i) {
      if (!contains(plain.final.bounds(i), tight[i])) ++failures;
      if (!(full.final.bounds(i) == tight[i])) ++failures;
      if (!(plain.final.bounds(i) == tight[i])) gap = true;
    }
    if (gap) ++gaps;
  }
  std::ostringstream d;
  d << examined << " instances, " << with_legal << " with legal assignments, " << failures
    << " failures; plain-mode gap rate " << gaps << "/" << with_legal;
  return {failures == 0 && examined == 200, d.str()};
}

Verdict confluence() {
  Rng rng(1006);
  int ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t width = 1 + rng.below(10);
    std::size_t atoms = 1 + rng.below(4);
    std::size_t sentences = 1 + rng.below(8);
    BoundAssignment initial = trial % 2 == 0 ? fx::sound_instance(rng, width, atoms, sentences).initial
                                             : fx::arbitrary_instance(rng, width, atoms, sentences);
    SampleSpace w = SampleSpace::uniform(width);
    std::size_t budget = 2 * width * initial.size();
    PropagationOutcome reference = propagate(initial, w);
    bool same = reference.steps <= budget;
    for (std::uint64_t order = 0; order < 10 && same; ++order) {
      PropagateOptions opts;
      opts.shuffle_seed = 7919 * (trial + 1) + order;
      PropagationOutcome out = propagate(initial, w, opts);
      same = out.consistent() == reference.consistent() && out.steps <= budget;
      if (same && reference.consistent()) same = out.final == reference.final;
    }
    if (same) ++ok;
  }
  std::ostringstream d;
  d << ok << "/100 instances agree across 10 orders within the step budget";
  return {ok == 100, d.str()};
}

Verdict inconsistency_detection() {
  CommandResult r = run_cli("solve '" + data_path("contradictory.kb") + "'");
  bool flagged = r.out.find("INCONSISTENT") != std::string::npos;
  std::ostringstream d;
  d << "exit " << r.status << (flagged ? ", INCONSISTENT reported" : ", no INCONSISTENT line");
  return {flagged && r.status == 1, d.str()};
}

Verdict storage_claim() {
  StorageCost example = storage_bits(10, 2);
  bool ok = example.numeric_bits == 20480 && example.incidence_bits == 1000;
  for (unsigned n = 10; n <= 30; ++n)
    for (unsigned m = 1; m <= 2; ++m) {
      StorageCost c = storage_bits(n, m);
      ok = ok && c.incidence_bits < c.numeric_bits;
    }
  return {ok, "(10, 2) -> (" + example.numeric_bits.str() + ", " + example.incidence_bits.str() +
                  "), incidences smaller for n in 10..30, m in 1..2"};
}

Verdict assignment_synthesis() {
  TargetSpec spec;
  spec.marginals["a"] = Rational(1, 2);
  spec.marginals["b"] = Rational(2, 5);
  spec.set_correlation("a", "b", 0.8165);
  spec.size = 10000;
  spec.seed = 2024;
  GeneratedModel m = incidences_from_probabilities(spec);
  GeneratedModel again = incidences_from_probabilities(spec);
  bool ok = m.env == again.env;
  double worst_marginal = 0;
  for (const auto& [name, p] : spec.marginals) {
    Rational quota(static_cast<long long>(marginal_quota(p, spec.size)), static_cast<long long>(spec.size));
    double off = std::abs((prob(Formula::atom(name), m.env, m.space) - quota).convert_to<double>());
    worst_marginal = std::max(worst_marginal, off);
  }
  double c = correlation(Formula::atom("a"), Formula::atom("b"), m.env, m.space).value();
  ok = ok && worst_marginal <= 1e-4 && std::abs(c - 0.8165) <= 0.01;

  std::string spec_file = "'" + data_path("correlated.txt") + "' --size 10000 --seed 2024";
  CommandResult first = run_cli("sample " + spec_file);
  CommandResult second = run_cli("sample " + spec_file);
  bool cli_repeat = first.status == 0 && !first.out.empty() && first.out == second.out;

  GeneratedModel ingested = incidences_from_records(parse_records(read_file(data_path("rain_wet.csv"))));
  Rational p_rain = prob(Formula::atom("rain"), ingested.env, ingested.space);

  std::ostringstream d;
  d << "marginal error " << worst_marginal << ", correlation " << c << ", repeat runs "
    << (cli_repeat ? "identical" : "differ") << ", p(rain) = " << to_fraction(p_rain);
  return {ok && cli_repeat && p_rain == Rational(3, 5), d.str()};
}

Verdict end_to_end_cli() {
  struct Case {
    std::string args;
    std::string golden;
    int status;
  };
  std::string kb = "'" + data_path("weather.kb") + "'";
  std::vector<Case> cases = {
      {"eval " + kb + " -f 'cloudy -> rain'", "weather_eval.txt", 0},
      {"solve " + kb, "weather_solve.txt", 0},
      {"solve " + kb + " --complete", "weather_solve_complete.txt", 0},
      {"query " + kb, "weather_query.txt", 0},
      {"solve '" + data_path("contradictory.kb") + "'", "contradictory_solve.txt", 1},
  };
  int matched = 0;
  std::string mismatches;
  for (const Case& c : cases) {
    CommandResult r = run_cli(c.args);
    std::string expected = read_file(std::string(INCCALC_TEST_DIR) + "/golden/" + c.golden);
    if (!expected.empty() && r.out == expected && r.status == c.status)
      ++matched;
    else
      mismatches += " " + c.golden;
  }
  std::ostringstream d;
  d << matched << "/" << cases.size() << " golden outputs byte-exact";
  if (!mismatches.empty()) d << "; mismatched:" << mismatches;
  return {matched == static_cast<int>(cases.size()), d.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> check;
  };
  const std::vector<Criterion> criteria = {
      {"truth-functional evaluation matches pointwise oracle", truth_functional_oracle},
      {"probability identities hold exactly", probability_identities},
      {"correlation reconstructs conjunction probability", correlation_formula},
      {"bound propagation is sound", laf_soundness},
      {"bound propagation against brute-force tight bounds", laf_tightness},
      {"propagation is confluent and terminates within budget", confluence},
      {"contradictory knowledge base is reported", inconsistency_detection},
      {"storage comparison", storage_claim},
      {"incidence synthesis from targets and records", assignment_synthesis},
      {"command-line golden outputs", end_to_end_cli},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Verdict v;
    try {
      v = criteria[k].check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << "AC" << (k + 1) << " " << criteria[k].name << ": " << v.detail
              << "\n";
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
