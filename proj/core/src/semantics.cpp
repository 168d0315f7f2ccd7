#include "gibmap/semantics.hpp"

#include <cmath>
#include <functional>

namespace gibmap {
namespace {

thread_local long g_rowScans = 0;

const std::vector<double>& cpt_row(const Network& net, int v,
                                   const std::vector<int>& parentValues) {
  const Cpt& table = net.cpt(v);
  std::vector<std::size_t> parentDom;
  parentDom.reserve(net.parents(v).size());
  for (int p : net.parents(v)) parentDom.push_back(net.domain_size(p));
  return table.rows[table.row_code(parentValues, parentDom)];
}

// Invokes fn for every combination of one value per parent, values drawn
// from the sets a assigns (full when unassigned). Declared parent order,
// domain order within a parent.
void for_each_parent_row(const Network& net, int v, const GAssignment& a,
                         const std::function<void(const std::vector<int>&)>& fn) {
  const auto& parents = net.parents(v);
  std::vector<std::vector<std::size_t>> choices;
  choices.reserve(parents.size());
  for (int p : parents) choices.push_back(a.get(net, p).values());
  std::vector<int> row(parents.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == parents.size()) {
      fn(row);
      return;
    }
    for (std::size_t val : choices[k]) {
      row[k] = static_cast<int>(val);
      rec(k + 1);
    }
  };
  rec(0);
}

}  // namespace

long row_scan_count() { return g_rowScans; }
void reset_row_scan_count() { g_rowScans = 0; }

double cond_value_set_prob(const Network& net, int v, const ValueSet& set,
                           const CompleteAssignment& d) {
  if (set.owner() != v || set.empty())
    throw SpanMismatch("value set does not belong to " + net.var(v).name);
  std::vector<int> parentValues;
  for (int p : net.parents(v)) {
    auto it = d.values.find(p);
    if (it == d.values.end())
      throw SpanMismatch("parent " + net.var(p).name + " of " + net.var(v).name +
                         " is unassigned");
    parentValues.push_back(it->second);
  }
  const auto& row = cpt_row(net, v, parentValues);
  double sum = 0.0;
  for (std::size_t i : set.values()) sum += row[i];
  return sum;
}

double joint_prob_exact(const Network& net, const GAssignment& a, double cap) {
  const int n = net.size();
  double terms = 1.0;
  std::vector<std::vector<std::size_t>> choices(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    choices[static_cast<std::size_t>(v)] = a.get(net, v).values();
    terms *= static_cast<double>(choices[static_cast<std::size_t>(v)].size());
  }
  if (terms > cap)
    throw TooLarge("joint enumeration needs " + std::to_string(terms) + " terms");

  // Ancestor-first order (descending index) so parents are set before use.
  std::vector<int> order(net.index_order().rbegin(), net.index_order().rend());
  std::vector<int> value(static_cast<std::size_t>(n), 0);
  double total = 0.0;
  std::function<void(std::size_t, double)> rec = [&](std::size_t k, double product) {
    if (k == order.size()) {
      total += product;
      return;
    }
    int v = order[k];
    std::vector<int> parentValues;
    parentValues.reserve(net.parents(v).size());
    for (int p : net.parents(v)) parentValues.push_back(value[static_cast<std::size_t>(p)]);
    const auto& row = cpt_row(net, v, parentValues);
    for (std::size_t d : choices[static_cast<std::size_t>(v)]) {
      value[static_cast<std::size_t>(v)] = static_cast<int>(d);
      double pd = row[d];
      if (pd != 0.0) rec(k + 1, product * pd);
    }
  };
  rec(0, 1.0);
  return total;
}

double cond_prob_exact(const Network& net, const GAssignment& target,
                       const GAssignment& given, double cap) {
  double denom = joint_prob_exact(net, given, cap);
  if (denom == 0.0)
    throw UndefinedConditional("conditioning event {" + given.render(net) +
                               "} has probability 0");
  auto m = meet(net, target, given);
  if (!m) return 0.0;
  return joint_prob_exact(net, *m, cap) / denom;
}

Bounds local_bounds(const Network& net, int v, const GAssignment& a) {
  ValueSet target = a.get(net, v);
  Bounds b{2.0, -1.0};
  for_each_parent_row(net, v, a, [&](const std::vector<int>& parentValues) {
    ++g_rowScans;
    const auto& row = cpt_row(net, v, parentValues);
    double p = 0.0;
    for (std::size_t i : target.values()) p += row[i];
    b.lo = std::min(b.lo, p);
    b.hi = std::max(b.hi, p);
  });
  return b;
}

bool gib_holds_local(const Network& net, const GAssignment& a, int v, double eps) {
  if (net.parents(v).empty()) return true;  // vacuous for roots
  if (!a.properly_assigns(v)) return true;  // full-set probability is 1 in every row
  Bounds b = local_bounds(net, v, a);
  return b.hi - b.lo <= eps * b.hi;
}

bool gib_holds_global(const Network& net, const GAssignment& a, int v,
                      double relTol, double cap) {
  const auto& anc = net.ancestors(v);
  if (anc.empty()) return true;
  if (!a.properly_assigns(v)) return true;
  GAssignment targetOnly = a.restrict_to(std::vector<int>{v});

  // Any refinement's conditional is a convex combination of the conditionals
  // at complete ancestor assignments included in a, so it is enough to check
  // that all the defined extreme points agree.
  std::vector<std::vector<std::size_t>> choices;
  double combos = 1.0;
  for (int w : anc) {
    choices.push_back(a.get(net, w).values());
    combos *= static_cast<double>(choices.back().size());
  }
  if (combos > cap)
    throw TooLarge("global GIB check needs " + std::to_string(combos) +
                   " ancestor assignments");

  double lo = 2.0, hi = -1.0;
  std::vector<int> picked(anc.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == anc.size()) {
      GAssignment given;
      for (std::size_t i = 0; i < anc.size(); ++i)
        given.assign(anc[i], ValueSet::single(anc[i], net.domain_size(anc[i]),
                                              static_cast<std::size_t>(picked[i])));
      double denom = joint_prob_exact(net, given, cap);
      if (denom == 0.0) return;  // undefined conditioning point: skipped
      auto m = meet(net, targetOnly, given);
      double c = m ? joint_prob_exact(net, *m, cap) / denom : 0.0;
      lo = std::min(lo, c);
      hi = std::max(hi, c);
      return;
    }
    for (std::size_t val : choices[k]) {
      picked[k] = static_cast<int>(val);
      rec(k + 1);
    }
  };
  rec(0);
  if (hi < 0.0)
    throw UndefinedConditional("all conditioning refinements have probability 0");
  return hi - lo <= relTol * hi;
}

bool delta_gib_holds(const Network& net, const GAssignment& a, int v, double delta) {
  if (net.parents(v).empty()) return true;
  if (!a.properly_assigns(v)) return true;
  Bounds b = local_bounds(net, v, a);
  return b.lo >= (1.0 - delta) * b.hi;
}

double gib_probability(const Network& net, const GAssignment& a, double eps) {
  double product = 1.0;
  for (int v : a.proper_span()) {
    Bounds b = local_bounds(net, v, a);
    if (!net.parents(v).empty() && b.hi - b.lo > eps * b.hi)
      throw NotGib("GIB condition fails at " + net.var(v).name);
    product *= b.hi;
  }
  return product;
}

Bounds delta_prob_bounds(const Network& net, const GAssignment& a, double delta) {
  Bounds out{1.0, 1.0};
  for (int v : a.proper_span()) {
    Bounds b = local_bounds(net, v, a);
    if (!net.parents(v).empty() && b.lo < (1.0 - delta) * b.hi)
      throw NotDeltaGib("delta-GIB condition fails at " + net.var(v).name);
    out.lo *= b.lo;
    out.hi *= b.hi;
  }
  return out;
}

}  // namespace gibmap
