// inccalc: command-line front end for incidence calculus knowledge bases.
//
// Exit codes: 0 success / consistent, 1 inconsistent, 2 usage or input error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "inccalc/inccalc.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInconsistent = 1;
constexpr int kUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw inccalc::Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inccalc::KnowledgeBase load_kb(const std::string& path) { return inccalc::parse_kb(read_file(path)); }

int cmd_eval(const std::string& kb_path, const std::string& text) {
  inccalc::KnowledgeBase kb = load_kb(kb_path);
  inccalc::Formula f = kb.formula(text);
  inccalc::Environment env = kb.environment();
  inccalc::Incidence i = inccalc::incidence_of(f, env, kb.space);
  std::cout << inccalc::encode_bitstring(i) << "\n"
            << inccalc::format_point_set(i) << "\n"
            << "p = " << inccalc::format_probability(inccalc::wp(i, kb.space)) << "\n";
  return kOk;
}

int report_status(const inccalc::PropagationOutcome& out) {
  if (out.consistent()) {
    std::cout << "CONSISTENT\n";
    return kOk;
  }
  std::cout << "INCONSISTENT: " << inccalc::to_string(out.final.sentence(out.culprit)) << "\n";
  return kInconsistent;
}

int cmd_solve(const std::string& kb_path, bool complete) {
  inccalc::KnowledgeBase kb = load_kb(kb_path);
  inccalc::PropagateOptions opts;
  opts.mode = complete ? inccalc::PropagationMode::Complete : inccalc::PropagationMode::Fixpoint;
  inccalc::PropagationOutcome out = inccalc::propagate(inccalc::init_assignment(kb), kb.space, opts);
  std::cout << inccalc::dump_assignment(out.final, kb.space);
  return report_status(out);
}

int cmd_check(const std::string& kb_path) {
  inccalc::KnowledgeBase kb = load_kb(kb_path);
  inccalc::BoundAssignment f = inccalc::init_assignment(kb);
  if (auto bad = inccalc::check_consistency(f)) {
    std::cout << "INCONSISTENT: " << inccalc::to_string(f.sentence(*bad)) << "\n";
    return kInconsistent;
  }
  std::cout << "CONSISTENT\n";
  return kOk;
}

int cmd_query(const std::string& kb_path, bool complete) {
  inccalc::KnowledgeBase kb = load_kb(kb_path);
  inccalc::PropagateOptions opts;
  opts.mode = complete ? inccalc::PropagationMode::Complete : inccalc::PropagationMode::Fixpoint;
  inccalc::PropagationOutcome out = inccalc::propagate(inccalc::init_assignment(kb), kb.space, opts);
  if (!out.consistent()) return report_status(out);
  int code = kOk;
  for (const inccalc::QueryAnswer& a : inccalc::answer_queries(kb, out.final)) {
    std::cout << a.text << "\n";
    if (a.error) code = kUsage;
  }
  return code;
}

int cmd_sample(const std::string& path, std::size_t size, std::uint64_t seed) {
  inccalc::TargetSpec spec = inccalc::parse_target_spec(read_file(path));
  spec.size = size;
  spec.seed = seed;
  std::cout << inccalc::write_kb_fragment(inccalc::incidences_from_probabilities(spec), false);
  return kOk;
}

int cmd_ingest(const std::string& path) {
  inccalc::RecordTable table = inccalc::parse_records(read_file(path));
  std::cout << inccalc::write_kb_fragment(inccalc::incidences_from_records(table), true);
  return kOk;
}

int cmd_storage(unsigned n, unsigned m) {
  inccalc::StorageCost cost = inccalc::storage_bits(n, m);
  std::cout << "numeric_bits = " << cost.numeric_bits.str() << "\n"
            << "incidence_bits = " << cost.incidence_bits.str() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incidence calculus: truth-functional probabilistic reasoning over sets of points"};
  app.require_subcommand(1);

  std::string kb_path;
  std::string formula;
  bool complete = false;
  std::string input;
  std::size_t size = 100;
  std::uint64_t seed = 0;
  unsigned propositions = 0;
  unsigned digits = 0;

  auto* eval = app.add_subcommand("eval", "Evaluate a formula's incidence and probability");
  eval->add_option("kb", kb_path, "Knowledge base file")->required();
  eval->add_option("-f,--formula", formula, "Formula to evaluate")->required();

  auto* solve = app.add_subcommand("solve", "Propagate bounds and print the resulting assignment");
  solve->add_option("kb", kb_path, "Knowledge base file")->required();
  solve->add_flag("--complete", complete, "Refine bounds by case splitting until exact");

  auto* query = app.add_subcommand("query", "Answer the knowledge base's queries");
  query->add_option("kb", kb_path, "Knowledge base file")->required();
  query->add_flag("--complete", complete, "Use exact bounds for interval answers");

  auto* check = app.add_subcommand("check", "Check declared bounds for inconsistency without propagating");
  check->add_option("kb", kb_path, "Knowledge base file")->required();

  auto* sample = app.add_subcommand("sample", "Build incidences from target probabilities and correlations");
  sample->add_option("spec", input, "Target file (marginal/correlation lines)")->required();
  sample->add_option("--size", size, "Number of sample-space points")->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "Random seed");

  auto* ingest = app.add_subcommand("ingest", "Build incidences from a table of observations");
  ingest->add_option("records", input, "Records file (CSV with 0/1/T/F/true/false)")->required();

  auto* storage = app.add_subcommand("storage", "Compare storage of probabilities against incidences");
  storage->add_option("-n,--propositions", propositions, "Number of propositions")->required();
  storage->add_option("-m,--digits", digits, "Decimal digits of precision")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*eval) return cmd_eval(kb_path, formula);
    if (*solve) return cmd_solve(kb_path, complete);
    if (*query) return cmd_query(kb_path, complete);
    if (*check) return cmd_check(kb_path);
    if (*sample) return cmd_sample(input, size, seed);
    if (*ingest) return cmd_ingest(input);
    if (*storage) return cmd_storage(propositions, digits);
  } catch (const inccalc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
