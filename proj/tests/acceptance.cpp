// End-to-end acceptance run: one line per criterion, exit 1 on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gibmap/hypercube.hpp"
#include "gibmap/json_io.hpp"
#include "gibmap/oracle.hpp"
#include "gibmap/search.hpp"
#include "gibmap/semantics.hpp"

using namespace gibmap;

namespace {

int g_failures = 0;

void report(int num, const std::string& label, bool ok, const std::string& detail = "") {
  std::printf("[%s] %d. %s%s%s\n", ok ? "PASS" : "FAIL", num, label.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++g_failures;
}

bool rel_eq(double a, double b, double tol) {
  double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= tol * std::max(scale, 1e-300) + 1e-15;
}

Network fixture(const std::string& name) {
  return validate_network(load_network_file(std::string(GIBMAP_FIXTURES) + "/" + name));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ValueSet concept_set(const Network& net, int v, const std::string& conceptName) {
  for (const Concept& c : net.var(v).concepts)
    if (c.name == conceptName) return c.values;
  throw std::runtime_error("missing concept " + conceptName);
}

ValueSet random_subset(std::mt19937_64& rng, int v, int domain) {
  ValueSet s(v, static_cast<std::size_t>(domain));
  while (s.empty())
    for (int d = 0; d < domain; ++d)
      if (rng() & 1) s.add(static_cast<std::size_t>(d));
  return s;
}

// Random assignment spanning v and a random subset of its ancestors.
GAssignment random_around(std::mt19937_64& rng, const Network& net, int v) {
  GAssignment a;
  a.assign(v, random_subset(rng, v, net.domain_size(v)));
  for (int u : net.ancestors(v))
    if (rng() & 1) a.assign(u, random_subset(rng, u, net.domain_size(u)));
  return a;
}

std::string run_cli(const std::string& args, const std::string& outFile) {
  std::string cmd = std::string("\"") + GIBMAP_CLI_PATH + "\" " + args + " > " + outFile +
                    " 2>&1";
  if (std::system(cmd.c_str()) == -1) return "";
  std::ifstream in(outFile, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  try {
    Network net = fixture("tracks.json");
    auto out = gib_map_search(net, parse_evidence(net, {{"at-tracks", "T"}}));
    ok = out.size() == 1;
    if (ok) {
      const GAssignment& a = out[0].assignment;
      GAssignment want;
      int at = net.id_of("at-tracks"), it = net.id_of("intend-to-go"),
          me = net.id_of("method");
      want.assign(at, ValueSet::single(at, net.domain_size(at),
                                       static_cast<std::size_t>(net.value_index(at, "T"))));
      want.assign(it, ValueSet::single(it, net.domain_size(it),
                                       static_cast<std::size_t>(net.value_index(it, "t"))));
      want.assign(me, concept_set(net, me, "some-method"));
      ok = a == want && a.get(net, net.id_of("kidnapped")).is_full() &&
           std::fabs(out[0].probability - 0.0495) <= 1e-12;
    }
    double dt = seconds_since(t0);
    if (dt >= 1.0) {
      ok = false;
      detail = "slow: " + std::to_string(dt) + "s";
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(1, "tracks: 99-method disjunction with intent, kidnapped free, p=0.0495, <1s", ok,
         detail);
}

void criterion2() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  try {
    Network net = fixture("vee.json");
    Evidence ev = parse_evidence(net, {{"C", "t"}});
    auto out = gib_map_search(net, ev);
    Explanation oracle = gib_map_bruteforce(net, ev);
    ok = out.size() == 1 && std::fabs(out[0].probability - 0.48) <= 1e-12 &&
         std::fabs(oracle.probability - 0.48) <= 1e-12 &&
         out[0].assignment == oracle.assignment;
    double dt = seconds_since(t0);
    if (dt >= 1.0) {
      ok = false;
      detail = "slow";
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(2, "vee: search and oracle agree on {C=t, A=t}, p=0.48, <1s", ok, detail);
}

void criteria3to5() {
  auto t0 = std::chrono::steady_clock::now();
  RandomNetSpec spec;
  spec.nodeCount = 5;
  spec.maxParents = 2;
  spec.minDomain = 2;
  spec.maxDomain = 3;
  spec.seed = 1001;
  std::mt19937_64 rng(17);

  long boundsChecked = 0, boundsBad = 0;
  long equivChecked = 0, equivBad = 0;
  long prodChecked = 0, prodBad = 0;
  std::string detail3, detail4, detail5;

  for (int t = 0; t < 100; ++t) {
    Network net = random_network(spec, static_cast<std::uint64_t>(t));

    // Refinement extremes vs local bounds, and containment of every sample.
    int v = static_cast<int>(rng() % static_cast<std::size_t>(net.size()));
    GAssignment a = random_around(rng, net, v);
    Bounds b = local_bounds(net, v, a);
    auto conds = refinement_conditionals(net, a, v);
    double lo = 2.0, hi = -1.0;
    bool inside = true;
    for (const auto& [ref, p] : conds) {
      lo = std::min(lo, p);
      hi = std::max(hi, p);
      if (p < b.lo - 1e-9 || p > b.hi + 1e-9) inside = false;
    }
    ++boundsChecked;
    bool vacuous = net.ancestors(v).empty();
    if (vacuous ? !rel_eq(b.lo, b.hi, 1e-12)
                : (conds.empty() || !inside || !rel_eq(lo, b.lo, 1e-9) ||
                   !rel_eq(hi, b.hi, 1e-9))) {
      ++boundsBad;
      if (detail3.empty())
        detail3 = "trial " + std::to_string(t) + " at " + net.var(v).name;
    }

    // Local equality test vs global invariance, several samples per net.
    for (int s = 0; s < 5; ++s) {
      int u = static_cast<int>(rng() % static_cast<std::size_t>(net.size()));
      GAssignment g = random_around(rng, net, u);
      ++equivChecked;
      bool localOk = gib_holds_local(net, g, u, 1e-12);
      bool globalOk = gib_holds_global(net, g, u, 1e-12);
      if (localOk != globalOk) {
        ++equivBad;
        if (detail4.empty())
          detail4 = "trial " + std::to_string(t) + " at " + net.var(u).name;
      }
    }

    // Product formula on every enumerated invariant assignment.
    for (const GAssignment& g : enumerate_gib_assignments(net, {})) {
      ++prodChecked;
      if (!rel_eq(gib_probability(net, g), joint_prob_exact(net, g), 1e-9)) {
        ++prodBad;
        if (detail5.empty()) detail5 = "trial " + std::to_string(t);
      }
    }
  }

  bool fast = seconds_since(t0) < 60.0;
  report(3, "local bounds equal refinement-conditional extremes (100 nets)",
         boundsBad == 0 && boundsChecked == 100 && fast, detail3);
  report(4, "local equality test matches global invariance (" +
                std::to_string(equivChecked) + " samples)",
         equivBad == 0, detail4);
  report(5, "product formula equals the exact joint (" + std::to_string(prodChecked) +
                " assignments)",
         prodBad == 0 && prodChecked > 0, detail5);
}

void criteria6and7() {
  RandomNetSpec spec;
  spec.seed = 1002;
  std::mt19937_64 rng(19);
  long bad6 = 0, bad7 = 0;
  std::string d6, d7;
  for (int t = 0; t < 100; ++t) {
    Network net = random_network(spec, static_cast<std::uint64_t>(t));
    int v = static_cast<int>(rng() % static_cast<std::size_t>(net.size()));
    Evidence ev;
    ev[v] = static_cast<int>(rng() % static_cast<std::size_t>(net.domain_size(v)));
    try {
      Explanation want = gib_map_bruteforce(net, ev);
      auto got = gib_map_search(net, ev);
      if (got.size() != 1 || std::fabs(got[0].probability - want.probability) >
                                 1e-12 * std::max(1.0, want.probability) ||
          got[0].assignment != want.assignment) {
        ++bad6;
        if (d6.empty()) d6 = "trial " + std::to_string(t);
      }
    } catch (const std::exception& e) {
      ++bad6;
      if (d6.empty()) d6 = e.what();
    }

    try {
      Network flat = strip_concepts(net);
      Explanation want = gib_map_bruteforce(flat, ev);
      auto got = gib_map_search(flat, ev);
      if (got.size() != 1 || !rel_eq(got[0].probability, want.probability, 1e-12) ||
          got[0].assignment != want.assignment) {
        ++bad7;
        if (d7.empty()) d7 = "trial " + std::to_string(t);
      }
    } catch (const std::exception& e) {
      ++bad7;
      if (d7.empty()) d7 = e.what();
    }
  }
  report(6, "search equals the brute-force optimum on 100 planted instances", bad6 == 0,
         d6);
  report(7, "without concepts the result reduces to the singleton-family optimum",
         bad7 == 0, d7);
}

void criterion8() {
  RandomNetSpec spec;
  spec.seed = 1003;
  std::mt19937_64 rng(23);
  long bad = 0;
  std::string detail;
  for (int s = 0; s < 1000; ++s) {
    Network net = random_network(spec, static_cast<std::uint64_t>(s % 50));
    int v = static_cast<int>(rng() % static_cast<std::size_t>(net.size()));
    GAssignment a = random_around(rng, net, v);
    bool exact = gib_holds_local(net, a, v, 0.0);
    if (delta_gib_holds(net, a, v, 0.0) != exact) ++bad;
    if (!delta_gib_holds(net, a, v, 1.0)) ++bad;
    double d1 = static_cast<double>(rng() % 10000) / 10000.0;
    double d2 = d1 + static_cast<double>(rng() % 10000) / 10000.0 * (1.0 - d1);
    if (delta_gib_holds(net, a, v, d1) && !delta_gib_holds(net, a, v, d2)) ++bad;
    if (bad && detail.empty()) detail = "sample " + std::to_string(s);
  }
  report(8, "relaxation endpoints and monotonicity (1000 samples)", bad == 0, detail);
}

void criterion9() {
  RandomNetSpec spec;
  spec.seed = 1004;
  std::mt19937_64 rng(29);
  long bad = 0;
  std::string detail;
  for (int t = 0; t < 100; ++t) {
    Network net = random_network(spec, static_cast<std::uint64_t>(t));
    int v = static_cast<int>(rng() % static_cast<std::size_t>(net.size()));
    GAssignment base;
    const auto& fam = net.permissible_sets(v);
    base.assign(v, fam[rng() % fam.size()]);
    auto fast = maximal_gib_hypercubes(net, v, base, 0.0, kDefaultEps, false);
    auto slow = maximal_gib_hypercubes_bruteforce(net, v, base, 0.0, kDefaultEps, false);
    bool same = fast.size() == slow.size();
    if (same)
      for (std::size_t i = 0; i < fast.size(); ++i)
        if (!(fast[i].to_assignment(net) == slow[i].to_assignment(net))) same = false;
    bool antichain = true;
    for (std::size_t i = 0; i < fast.size() && antichain; ++i)
      for (std::size_t j = 0; j < fast.size(); ++j)
        if (i != j &&
            refines(net, fast[i].to_assignment(net), fast[j].to_assignment(net)))
          antichain = false;
    if (!same || !antichain) {
      ++bad;
      if (detail.empty()) detail = "trial " + std::to_string(t);
    }
  }
  report(9, "lattice descent equals the exhaustive maximal enumeration (100 nets)",
         bad == 0, detail);
}

void criterion10() {
  std::string fx(GIBMAP_FIXTURES);
  std::vector<std::string> cmds = {
      "explain --network " + fx + "/tracks.json --evidence at-tracks=T",
      "explain --network " + fx + "/vee.json --evidence C=t --k 3",
      "explain --network " + fx + "/dep.json --evidence B=t --delta 0.8 --format json",
      "oracle --network " + fx + "/vee.json --evidence C=t --diff",
      "validate --network " + fx + "/chain.json",
      "check --trials 20 --seed 42 --format json",
  };
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    std::string f1 = "/tmp/gibmap_acc_" + std::to_string(i) + "_a.txt";
    std::string f2 = "/tmp/gibmap_acc_" + std::to_string(i) + "_b.txt";
    std::string a = run_cli(cmds[i], f1);
    std::string b = run_cli(cmds[i], f2);
    if (a.empty() || a != b) {
      ok = false;
      if (detail.empty()) detail = "command: " + cmds[i];
    }
  }
  report(10, "repeated CLI runs are byte-identical", ok, detail);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criteria3to5();
  criteria6and7();
  criterion8();
  criterion9();
  criterion10();
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
