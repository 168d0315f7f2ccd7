#include "gibmap/hypercube.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace gibmap {
namespace {

bool permissible(const Network& net, const ValueSet& s) {
  const auto& fam = net.permissible_sets(s.owner());
  return std::find(fam.begin(), fam.end(), s) != fam.end();
}

// Maximal members of M_w contained in `bound`.
std::vector<ValueSet> maximal_permissible_within(const Network& net, int w,
                                                 const ValueSet& bound) {
  std::vector<ValueSet> inside;
  for (const auto& s : net.permissible_sets(w))
    if (s.subset_of(bound)) inside.push_back(s);
  std::vector<ValueSet> out;
  for (const auto& s : inside) {
    bool dominated = false;
    for (const auto& t : inside)
      if (s.strict_subset_of(t)) {
        dominated = true;
        break;
      }
    if (!dominated) out.push_back(s);
  }
  return out;
}

// Maximal members of M_w strictly contained in s: the one-step refinements.
std::vector<ValueSet> immediate_refinements(const Network& net, int w,
                                            const ValueSet& s) {
  std::vector<ValueSet> inside;
  for (const auto& t : net.permissible_sets(w))
    if (t.strict_subset_of(s)) inside.push_back(t);
  std::vector<ValueSet> out;
  for (const auto& t : inside) {
    bool dominated = false;
    for (const auto& u : inside)
      if (t.strict_subset_of(u)) {
        dominated = true;
        break;
      }
    if (!dominated) out.push_back(t);
  }
  return out;
}

struct Candidate {
  ValueSet target;
  std::vector<ValueSet> parentSets;

  bool refines(const Candidate& other) const {
    if (!target.subset_of(other.target)) return false;
    for (std::size_t i = 0; i < parentSets.size(); ++i)
      if (!parentSets[i].subset_of(other.parentSets[i])) return false;
    return true;
  }
  bool operator<(const Candidate& o) const {
    if (target != o.target) return target < o.target;
    return parentSets < o.parentSets;
  }
  bool operator==(const Candidate& o) const {
    return target == o.target && parentSets == o.parentSets;
  }
};

}  // namespace

GAssignment GibHypercube::to_assignment(const Network& net) const {
  GAssignment a;
  a.assign(base, target);
  const auto& parents = net.parents(base);
  for (std::size_t i = 0; i < parents.size(); ++i) a.assign(parents[i], parentSets[i]);
  return a;
}

bool is_gib_hypercube(const Network& net, const GibHypercube& h, double delta,
                      double eps) {
  if (h.target.owner() != h.base ||
      h.parentSets.size() != net.parents(h.base).size())
    throw BadSpan("hypercube must span " + net.var(h.base).name + " and its parents");
  const auto& parents = net.parents(h.base);
  for (std::size_t i = 0; i < parents.size(); ++i) {
    if (h.parentSets[i].owner() != parents[i])
      throw BadSpan("parent set " + std::to_string(i) + " owner mismatch");
    if (!permissible(net, h.parentSets[i]))
      throw ImpermissibleSet("set for " + net.var(parents[i]).name +
                             " is not in its permissible family");
  }
  if (!permissible(net, h.target))
    throw ImpermissibleSet("target set for " + net.var(h.base).name +
                           " is not in its permissible family");
  GAssignment a = h.to_assignment(net);
  return delta == 0.0 ? gib_holds_local(net, a, h.base, eps)
                      : delta_gib_holds(net, a, h.base, delta);
}

std::vector<GibHypercube> maximal_gib_hypercubes(const Network& net, int v,
                                                 const GAssignment& constraint,
                                                 double delta, double eps,
                                                 bool refineTarget) {
  const auto& parents = net.parents(v);
  ValueSet targetBound = constraint.get(net, v);
  if (targetBound.empty()) throw UnknownVariable("constraint assigns empty set");

  std::vector<ValueSet> targetTops =
      refineTarget ? maximal_permissible_within(net, v, targetBound)
                   : std::vector<ValueSet>{targetBound};

  // Least refined candidates: every coordinate at its top.
  std::vector<std::vector<ValueSet>> parentTops;
  for (int w : parents)
    parentTops.push_back(maximal_permissible_within(net, w, constraint.get(net, w)));

  std::deque<Candidate> queue;
  std::set<Candidate> seen;
  std::vector<Candidate> roots;
  {
    std::vector<ValueSet> picked;
    std::function<void(std::size_t)> build = [&](std::size_t k) {
      if (k == parents.size()) {
        for (const auto& t : targetTops) roots.push_back(Candidate{t, picked});
        return;
      }
      for (const auto& s : parentTops[k]) {
        picked.push_back(s);
        build(k + 1);
        picked.pop_back();
      }
    };
    build(0);
  }
  for (auto& c : roots)
    if (seen.insert(c).second) queue.push_back(c);

  auto passes = [&](const Candidate& c) {
    GAssignment a;
    a.assign(v, c.target);
    for (std::size_t i = 0; i < parents.size(); ++i) a.assign(parents[i], c.parentSets[i]);
    return delta == 0.0 ? gib_holds_local(net, a, v, eps)
                        : delta_gib_holds(net, a, v, delta);
  };

  // Descend only through failing candidates; a passing candidate caps every
  // chain below it, so collected candidates cover all maximal hypercubes.
  std::vector<Candidate> collected;
  while (!queue.empty()) {
    Candidate c = queue.front();
    queue.pop_front();
    if (passes(c)) {
      collected.push_back(c);
      continue;
    }
    if (refineTarget) {
      for (const auto& t : immediate_refinements(net, v, c.target)) {
        Candidate child = c;
        child.target = t;
        if (seen.insert(child).second) queue.push_back(child);
      }
    }
    for (std::size_t i = 0; i < parents.size(); ++i) {
      for (const auto& s : immediate_refinements(net, parents[i], c.parentSets[i])) {
        Candidate child = c;
        child.parentSets[i] = s;
        if (seen.insert(child).second) queue.push_back(child);
      }
    }
  }

  // Keep the antichain of least refined survivors.
  std::vector<GibHypercube> out;
  for (const auto& c : collected) {
    bool dominated = false;
    for (const auto& d : collected) {
      if (!(c == d) && c.refines(d)) {
        dominated = true;
        break;
      }
    }
    if (dominated) continue;
    GibHypercube h;
    h.base = v;
    h.target = c.target;
    h.parentSets = c.parentSets;
    GAssignment a;
    a.assign(v, c.target);
    for (std::size_t i = 0; i < parents.size(); ++i) a.assign(parents[i], c.parentSets[i]);
    h.conditional = local_bounds(net, v, a).hi;
    out.push_back(std::move(h));
  }
  std::sort(out.begin(), out.end(), [](const GibHypercube& x, const GibHypercube& y) {
    if (x.target != y.target) return x.target < y.target;
    return x.parentSets < y.parentSets;
  });
  return out;
}

}  // namespace gibmap
