#include "gibmap/search.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

#include "gibmap/hypercube.hpp"

namespace gibmap {
namespace {

std::string fmt_score(double p) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", p);
  return buf;
}

struct AgendaEntry {
  SearchState state;
  int unexpanded = 0;      // properly spanned, not yet expanded
  std::string rendering;   // canonical, declaration order
  long seq = 0;

  // Pop order: higher score; then fewer unexpanded nodes; then rendering;
  // then insertion order. priority_queue pops the "largest", so the
  // comparator says "worse than".
  bool operator<(const AgendaEntry& o) const {
    if (state.score != o.state.score) return state.score < o.state.score;
    if (unexpanded != o.unexpanded) return unexpanded > o.unexpanded;
    if (rendering != o.rendering) return rendering > o.rendering;
    return seq > o.seq;
  }
};

int count_unexpanded(const SearchState& s) {
  int n = 0;
  for (int v : s.assignment.proper_span())
    if (!s.expanded.count(v)) ++n;
  return n;
}

}  // namespace

SearchState initial_state(const Network& net, const Evidence& evidence,
                          std::vector<std::string>* warnings) {
  SearchState s;
  for (const auto& [v, value] : evidence) {
    if (v < 0 || v >= net.size())
      throw UnknownVariable("evidence variable id " + std::to_string(v));
    if (value < 0 || value >= static_cast<int>(net.domain_size(v)))
      throw UnknownValue("evidence value index " + std::to_string(value) + " for " +
                         net.var(v).name);
    s.assignment.assign(
        v, ValueSet::single(v, net.domain_size(v), static_cast<std::size_t>(value)));
  }
  if (evidence.empty() && warnings) {
    warnings->push_back(
        "empty evidence: the result is the trivial empty explanation with probability 1");
  }
  return s;
}

std::optional<int> select_node(const Network& net, const SearchState& s) {
  int best = -1;
  int bestIndex = 0;
  for (int v : s.assignment.proper_span()) {
    if (s.expanded.count(v)) continue;
    int idx = net.index_of(v);
    if (best < 0 || idx < bestIndex) {
      best = v;
      bestIndex = idx;
    }
  }
  if (best < 0) return std::nullopt;
  return best;
}

std::vector<SearchState> expand(const Network& net, const SearchState& s, int v,
                                const Evidence& evidence, const SearchOptions& opts) {
  auto selected = select_node(net, s);
  if (!selected || *selected != v)
    throw NotSelected(net.var(v).name + " is not the smallest-index unexpanded node");

  bool holds = opts.delta == 0.0 ? gib_holds_local(net, s.assignment, v, opts.eps)
                                 : delta_gib_holds(net, s.assignment, v, opts.delta);
  if (holds) {
    SearchState child = s;
    child.expanded.insert(v);
    child.lastExpanded = net.index_of(v);
    child.score *= local_bounds(net, v, s.assignment).hi;
    return {child};
  }

  bool refineTarget = opts.refineTarget && !evidence.count(v);
  std::vector<SearchState> out;
  for (const auto& h :
       maximal_gib_hypercubes(net, v, s.assignment, opts.delta, opts.eps, refineTarget)) {
    auto refined = meet(net, s.assignment, h.to_assignment(net));
    if (!refined) continue;  // inconsistent candidate: pruned
    SearchState child;
    child.assignment = std::move(*refined);
    child.expanded = s.expanded;
    child.expanded.insert(v);
    child.lastExpanded = net.index_of(v);
    child.score = s.score * h.conditional;
    out.push_back(std::move(child));
  }
  return out;
}

std::vector<Explanation> gib_map_search(const Network& net, const Evidence& evidence,
                                        const SearchOptions& opts,
                                        std::vector<std::string>* warnings) {
  std::priority_queue<AgendaEntry> agenda;
  std::set<std::pair<std::string, std::string>> visited;
  long seq = 0;

  auto push = [&](SearchState&& state) {
    std::string rendering = state.assignment.render(net);
    std::string expandedKey;
    for (int v : state.expanded) expandedKey += std::to_string(v) + ",";
    if (!visited.insert({rendering, expandedKey}).second) return;
    AgendaEntry e;
    e.unexpanded = count_unexpanded(state);
    e.rendering = std::move(rendering);
    e.seq = seq++;
    e.state = std::move(state);
    agenda.push(std::move(e));
  };

  push(initial_state(net, evidence, warnings));

  std::vector<Explanation> results;
  while (!agenda.empty() && static_cast<int>(results.size()) < opts.k) {
    AgendaEntry top = agenda.top();
    agenda.pop();
    if (opts.trace)
      opts.trace->push_back("pop score=" + fmt_score(top.state.score) + " {" +
                            top.rendering + "}");
    auto v = select_node(net, top.state);
    if (!v) {
      if (top.state.score <= 0.0) continue;  // zero-probability completion
      Explanation e;
      e.assignment = top.state.assignment;
      e.probability = top.state.score;
      if (opts.delta > 0.0) {
        e.bounds = delta_prob_bounds(net, top.state.assignment, opts.delta);
        e.experimental = true;
      }
      if (opts.trace)
        opts.trace->push_back("emit p=" + fmt_score(e.probability) + " {" +
                              top.rendering + "}");
      results.push_back(std::move(e));
      continue;
    }
    if (opts.trace) opts.trace->push_back("expand " + net.var(*v).name);
    for (auto& child : expand(net, top.state, *v, evidence, opts)) push(std::move(child));
  }
  return results;
}

Evidence parse_evidence(const Network& net,
                        const std::map<std::string, std::string>& byName) {
  Evidence out;
  for (const auto& [name, value] : byName) {
    int v = net.id_of(name);
    out[v] = net.value_index(v, value);
  }
  return out;
}

}  // namespace gibmap
