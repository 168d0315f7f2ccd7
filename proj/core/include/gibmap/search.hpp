#ifndef GIBMAP_SEARCH_HPP_
#define GIBMAP_SEARCH_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gibmap/assign.hpp"
#include "gibmap/semantics.hpp"

namespace gibmap {

// Agenda entry of the best-first search. `score` is the optimistic product
// of local conditionals over expanded nodes.
struct SearchState {
  GAssignment assignment;
  std::set<int> expanded;
  int lastExpanded = 0;  // node index, 0 before any expansion
  double score = 1.0;
};

struct Explanation {
  GAssignment assignment;  // compact: no full-domain entries
  double probability = 0.0;
  std::optional<Bounds> bounds;  // present when delta > 0
  bool experimental = false;     // delta > 0 results are upper-bound ranked
};

struct SearchOptions {
  double delta = 0.0;
  double eps = kDefaultEps;
  int k = 1;
  bool refineTarget = false;
  double jointCap = kDefaultJointCap;
  std::vector<std::string>* trace = nullptr;  // pop/expand event log
};

using Evidence = std::map<int, int>;  // variable id -> observed value index

SearchState initial_state(const Network& net, const Evidence& evidence,
                          std::vector<std::string>* warnings = nullptr);

// Unexpanded properly-spanned node with the smallest index, if any.
std::optional<int> select_node(const Network& net, const SearchState& s);

// NotSelected unless v == select_node(s). If the GIB condition already holds
// at v, the single successor marks v expanded; otherwise one successor per
// maximal GIB hypercube (empty meets pruned). Evidence targets stay pinned.
std::vector<SearchState> expand(const Network& net, const SearchState& s, int v,
                                const Evidence& evidence, const SearchOptions& opts);

// Best-first GIB-MAP search; up to k explanations in non-increasing
// probability order. Deterministic for identical inputs.
std::vector<Explanation> gib_map_search(const Network& net, const Evidence& evidence,
                                        const SearchOptions& opts = {},
                                        std::vector<std::string>* warnings = nullptr);

Evidence parse_evidence(const Network& net,
                        const std::map<std::string, std::string>& byName);

}  // namespace gibmap

#endif  // GIBMAP_SEARCH_HPP_
