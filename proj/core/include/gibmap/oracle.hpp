#ifndef GIBMAP_ORACLE_HPP_
#define GIBMAP_ORACLE_HPP_

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "gibmap/hypercube.hpp"
#include "gibmap/search.hpp"

namespace gibmap {

// Deterministic generator of small test networks. `independencePlantRate`
// copies CPT rows across a block of one parent's values so that non-trivial
// GIB structure actually occurs.
struct RandomNetSpec {
  int nodeCount = 5;
  int maxParents = 2;
  int minDomain = 2;
  int maxDomain = 3;
  double conceptDensity = 0.5;
  double independencePlantRate = 0.7;
  std::uint64_t seed = 0;
};

Network random_network(const RandomNetSpec& spec, std::uint64_t trial);

struct EnumCaps {
  double maxCombos = 1e6;   // permissible-set combinations
  double jointCap = kDefaultJointCap;
};

// All G-assignments over permissible sets, carrying exactly the evidence
// singletons, that pass the global GIB check at every properly spanned node.
std::vector<GAssignment> enumerate_gib_assignments(const Network& net,
                                                   const Evidence& evidence,
                                                   const EnumCaps& caps = {});

// Exact GIB-MAP by exhaustive enumeration, same tie-break as the search.
Explanation gib_map_bruteforce(const Network& net, const Evidence& evidence,
                               const EnumCaps& caps = {});

// Conditionals P(a(v) | B) for every refinement B of a over the ancestors of
// v (all non-empty subsets per ancestor). Zero-probability conditioning
// refinements are dropped. TooLarge past the cap.
std::vector<std::pair<GAssignment, double>> refinement_conditionals(
    const Network& net, const GAssignment& a, int v, double cap = 1e6);

// Exhaustive counterpart of maximal_gib_hypercubes: filter all permissible
// combinations, then keep the maximal ones.
std::vector<GibHypercube> maximal_gib_hypercubes_bruteforce(
    const Network& net, int v, const GAssignment& constraint, double delta,
    double eps, bool refineTarget);

struct AssertionStat {
  long checked = 0;
  long failed = 0;
};

struct TheoremReport {
  int trials = 0;
  AssertionStat boundsExtremes;    // (a) local bounds = refinement extremes
  AssertionStat localIffGlobal;    // (b) local <=> global GIB
  AssertionStat productExact;      // (c) GIB product = exact joint
  AssertionStat boundsContain;     // (d) every refinement conditional in bounds
  AssertionStat searchOptimal;     // (e) search = brute-force GIB-MAP
  long deltaAgree = 0;             // (f) reported only
  long deltaDisagree = 0;
  std::string firstCounterexample;

  bool pass() const;
  std::string to_text() const;
  nlohmann::ordered_json to_json() const;
};

TheoremReport check_theorems(const RandomNetSpec& spec, int trials);

}  // namespace gibmap

#endif  // GIBMAP_ORACLE_HPP_
