// gibmap: relevance-based abductive explanations for belief networks.
//
// Subcommands: validate | explain | oracle | check.
// Exit codes: 0 ok, 2 input/validation error, 3 no explanation,
// 4 verification mismatch.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "gibmap/json_io.hpp"
#include "gibmap/model.hpp"
#include "gibmap/oracle.hpp"
#include "gibmap/search.hpp"

namespace {

using namespace gibmap;

std::string fmt_prob(double p) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", p);
  return buf;
}

// JSON numbers carry the same 12-significant-digit rendering as text mode.
double round_prob(double p) { return std::strtod(fmt_prob(p).c_str(), nullptr); }

struct QueryArgs {
  std::string networkPath;
  std::vector<std::string> evidencePairs;
  std::string evidenceFile;
  double delta = 0.0;
  double eps = kDefaultEps;
  int k = 1;
  std::string format = "text";
  bool refineTarget = false;
  double maxCombos = 1e6;
  double maxJoint = kDefaultJointCap;
  bool trace = false;
};

void add_query_flags(CLI::App* cmd, QueryArgs& args) {
  cmd->add_option("--network", args.networkPath, "network JSON file")->required();
  cmd->add_option("--evidence", args.evidencePairs, "observed value, name=value (repeatable)");
  cmd->add_option("--evidence-file", args.evidenceFile, "JSON object of name: value pairs");
  cmd->add_option("--delta", args.delta, "delta-GIB relaxation in [0,1]")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--eps", args.eps, "relative tolerance for the local equality test")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--format", args.format, "text | json")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--max-combos", args.maxCombos, "enumeration cap for the oracle");
  cmd->add_option("--max-joint", args.maxJoint, "term cap for exact joint probabilities");
}

Evidence collect_evidence(const Network& net, const QueryArgs& args) {
  std::map<std::string, std::string> byName;
  if (!args.evidenceFile.empty()) {
    std::ifstream in(args.evidenceFile);
    if (!in) throw ParseError("cannot open '" + args.evidenceFile + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(e.what());
    }
    if (!j.is_object()) throw ParseError("evidence file: expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!it.value().is_string()) throw ParseError("evidence file: expected string values");
      byName[it.key()] = it.value().get<std::string>();
    }
  }
  for (const auto& pair : args.evidencePairs) {
    auto at = pair.find('=');
    if (at == std::string::npos)
      throw ParseError("evidence '" + pair + "' is not name=value");
    std::string name = pair.substr(0, at), value = pair.substr(at + 1);
    auto it = byName.find(name);
    if (it != byName.end() && it->second != value)
      throw ParseError("evidence for '" + name + "' given twice with different values");
    byName[name] = value;
  }
  return parse_evidence(net, byName);
}

// Evidence variables first, then the rest of the proper span, both in
// declaration order.
std::vector<int> display_order(const GAssignment& a, const Evidence& evidence) {
  std::vector<int> out;
  for (const auto& [v, d] : evidence)
    if (a.properly_assigns(v)) out.push_back(v);
  for (int v : a.proper_span())
    if (!evidence.count(v)) out.push_back(v);
  return out;
}

void print_explanation_text(const Network& net, const Explanation& e,
                            const Evidence& evidence) {
  std::cout << "p=" << fmt_prob(e.probability) << "\n";
  if (e.bounds)
    std::cout << "p_bounds=[" << fmt_prob(e.bounds->lo) << "," << fmt_prob(e.bounds->hi)
              << "]" << (e.experimental ? " (experimental)" : "") << "\n";
  for (int v : display_order(e.assignment, evidence)) {
    std::cout << net.var(v).name << "="
              << render_set(net, e.assignment.get(net, v)) << "\n";
  }
}

nlohmann::ordered_json explanation_json(const Network& net, const Explanation& e,
                                        const Evidence& evidence) {
  nlohmann::ordered_json j;
  j["p"] = round_prob(e.probability);
  if (e.bounds) {
    j["p_bounds"] = {round_prob(e.bounds->lo), round_prob(e.bounds->hi)};
    j["experimental"] = e.experimental;
  }
  j["assignment"] = nlohmann::ordered_json::array();
  for (int v : display_order(e.assignment, evidence)) {
    ValueSet s = e.assignment.get(net, v);
    nlohmann::ordered_json entry;
    entry["name"] = net.var(v).name;
    entry["values"] = nlohmann::ordered_json::array();
    for (std::size_t i : s.values()) entry["values"].push_back(net.var(v).domain[i]);
    std::string cname = net.concept_name(s);
    if (!cname.empty()) entry["concept"] = cname;
    j["assignment"].push_back(std::move(entry));
  }
  return j;
}

int cmd_validate(const std::string& path) {
  std::vector<std::string> warnings;
  Network net = validate_network(load_network_file(path), &warnings);
  std::cout << "index:";
  for (int v : net.index_order()) std::cout << " " << net.var(v).name;
  std::cout << "\n";
  for (const auto& w : warnings) std::cout << "warning: " << w << "\n";
  return 0;
}

int cmd_explain(const QueryArgs& args) {
  std::vector<std::string> warnings;
  Network net = validate_network(load_network_file(args.networkPath), &warnings);
  Evidence evidence = collect_evidence(net, args);

  SearchOptions opts;
  opts.delta = args.delta;
  opts.eps = args.eps;
  opts.k = args.k;
  opts.refineTarget = args.refineTarget;
  opts.jointCap = args.maxJoint;
  std::vector<std::string> trace;
  if (args.trace) opts.trace = &trace;

  auto results = gib_map_search(net, evidence, opts, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& line : trace) std::cerr << "trace: " << line << "\n";
  if (results.empty()) {
    std::cerr << "no explanation exists for the given evidence\n";
    return 3;
  }
  if (args.format == "json") {
    nlohmann::ordered_json out;
    out["explanations"] = nlohmann::ordered_json::array();
    for (const auto& e : results) out["explanations"].push_back(explanation_json(net, e, evidence));
    std::cout << out.dump() << "\n";
  } else {
    bool first = true;
    for (const auto& e : results) {
      if (!first) std::cout << "\n";
      first = false;
      print_explanation_text(net, e, evidence);
    }
  }
  return 0;
}

int cmd_oracle(const QueryArgs& args, bool diff) {
  Network net = validate_network(load_network_file(args.networkPath));
  Evidence evidence = collect_evidence(net, args);
  EnumCaps caps;
  caps.maxCombos = args.maxCombos;
  caps.jointCap = args.maxJoint;
  Explanation truth = gib_map_bruteforce(net, evidence, caps);
  if (args.format == "json") {
    nlohmann::ordered_json out;
    out["explanations"] = {explanation_json(net, truth, evidence)};
    std::cout << out.dump() << "\n";
  } else {
    print_explanation_text(net, truth, evidence);
  }
  if (diff) {
    SearchOptions opts;
    opts.eps = args.eps;
    opts.jointCap = args.maxJoint;
    auto results = gib_map_search(net, evidence, opts);
    bool match = !results.empty() &&
                 results.front().assignment == truth.assignment &&
                 std::abs(results.front().probability - truth.probability) <=
                     1e-12 * truth.probability;
    if (!match) {
      std::cerr << "mismatch: search {"
                << (results.empty() ? std::string("<none>")
                                    : results.front().assignment.render(net))
                << "} vs brute force {" << truth.assignment.render(net) << "}\n";
      return 4;
    }
  }
  return 0;
}

int cmd_check(const RandomNetSpec& spec, int trials, const std::string& format) {
  TheoremReport report = check_theorems(spec, trials);
  if (format == "json")
    std::cout << report.to_json().dump() << "\n";
  else
    std::cout << report.to_text();
  return report.pass() ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GIB-MAP explanations for discrete belief networks"};
  app.require_subcommand(1);

  std::string validatePath;
  auto* validate = app.add_subcommand("validate", "validate a network file");
  validate->add_option("--network", validatePath, "network JSON file")->required();

  QueryArgs explainArgs;
  auto* explain = app.add_subcommand("explain", "best-first GIB-MAP search");
  add_query_flags(explain, explainArgs);
  explain->add_option("--k", explainArgs.k, "number of explanations")
      ->check(CLI::PositiveNumber);
  explain->add_flag("--refine-target", explainArgs.refineTarget,
                    "let hypercubes refine the expanded node's own set");
  explain->add_flag("--trace", explainArgs.trace, "log pop/expand events to stderr");

  QueryArgs oracleArgs;
  bool diff = false;
  auto* oracle = app.add_subcommand("oracle", "brute-force GIB-MAP");
  add_query_flags(oracle, oracleArgs);
  oracle->add_flag("--diff", diff, "also run the search and compare");

  RandomNetSpec spec;
  int trials = 100;
  std::string checkFormat = "text";
  auto* check = app.add_subcommand("check", "verify locality properties on random networks");
  check->add_option("--trials", trials, "number of random instances")
      ->check(CLI::NonNegativeNumber);
  check->add_option("--seed", spec.seed, "generator seed");
  check->add_option("--nodes", spec.nodeCount, "variables per network");
  check->add_option("--max-parents", spec.maxParents, "parent cap");
  check->add_option("--min-domain", spec.minDomain, "smallest domain size");
  check->add_option("--max-domain", spec.maxDomain, "largest domain size");
  check->add_option("--concept-density", spec.conceptDensity, "probability of a concept");
  check->add_option("--plant-rate", spec.independencePlantRate,
                    "probability of a planted constant block");
  check->add_option("--format", checkFormat, "text | json")
      ->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // flag errors fall under the input-error code
  }

  try {
    if (validate->parsed()) return cmd_validate(validatePath);
    if (explain->parsed()) return cmd_explain(explainArgs);
    if (oracle->parsed()) return cmd_oracle(oracleArgs, diff);
    if (check->parsed()) return cmd_check(spec, trials, checkFormat);
  } catch (const gibmap::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
