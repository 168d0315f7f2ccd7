#include "gibmap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "gibmap/json_io.hpp"

namespace gibmap {
namespace {

std::string fmt_prob(double p) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", p);
  return buf;
}

// All complete network assignments with their chain-rule probabilities,
// for one-pass event sums during exhaustive checks.
struct JointTable {
  explicit JointTable(const Network& net) : net_(net) {
    const int n = net.size();
    std::vector<int> order(net.index_order().rbegin(), net.index_order().rend());
    std::vector<int> value(static_cast<std::size_t>(n), 0);
    std::function<void(std::size_t, double)> rec = [&](std::size_t k, double product) {
      if (k == order.size()) {
        values_.push_back(value);
        probs_.push_back(product);
        return;
      }
      int v = order[k];
      std::vector<int> parentValues;
      for (int p : net_.parents(v)) parentValues.push_back(value[static_cast<std::size_t>(p)]);
      const Cpt& table = net_.cpt(v);
      std::vector<std::size_t> parentDom;
      for (int p : net_.parents(v)) parentDom.push_back(net_.domain_size(p));
      const auto& row = table.rows[table.row_code(parentValues, parentDom)];
      for (std::size_t d = 0; d < net_.domain_size(v); ++d) {
        value[static_cast<std::size_t>(v)] = static_cast<int>(d);
        rec(k + 1, product * row[d]);
      }
    };
    rec(0, 1.0);
  }

  double event_prob(const GAssignment& a) const {
    double total = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      bool in = true;
      for (const auto& [v, s] : a.entries()) {
        if (!s.contains(static_cast<std::size_t>(values_[i][static_cast<std::size_t>(v)]))) {
          in = false;
          break;
        }
      }
      if (in) total += probs_[i];
    }
    return total;
  }

  // Global GIB check at v: one pass accumulating, for every complete
  // ancestor assignment included in a, the mass of the conditioning event
  // and of its intersection with a(v). All defined conditionals (the
  // extreme points of the refinement lattice) must agree.
  bool gib_global(const GAssignment& a, int v, double relTol) const {
    const auto& anc = net_.ancestors(v);
    if (anc.empty() || !a.properly_assigns(v)) return true;
    ValueSet target = a.get(net_, v);
    std::vector<ValueSet> ancSets;
    std::vector<std::size_t> radix;
    std::size_t cells = 1;
    for (int w : anc) {
      ancSets.push_back(a.get(net_, w));
      radix.push_back(net_.domain_size(w));
      cells *= net_.domain_size(w);
    }
    std::vector<double> denom(cells, 0.0), numer(cells, 0.0);
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      std::size_t code = 0;
      bool in = true;
      for (std::size_t k = 0; k < anc.size(); ++k) {
        int val = values_[i][static_cast<std::size_t>(anc[k])];
        if (!ancSets[k].contains(static_cast<std::size_t>(val))) {
          in = false;
          break;
        }
        code = code * radix[k] + static_cast<std::size_t>(val);
      }
      if (!in) continue;
      denom[code] += probs_[i];
      if (target.contains(
              static_cast<std::size_t>(values_[i][static_cast<std::size_t>(v)])))
        numer[code] += probs_[i];
    }
    double lo = 2.0, hi = -1.0;
    for (std::size_t c = 0; c < cells; ++c) {
      if (denom[c] == 0.0) continue;  // undefined conditioning point: skipped
      double cond = numer[c] / denom[c];
      lo = std::min(lo, cond);
      hi = std::max(hi, cond);
    }
    if (hi < 0.0)
      throw UndefinedConditional("all conditioning refinements have probability 0");
    return hi - lo <= relTol * hi;
  }

 private:
  const Network& net_;
  std::vector<std::vector<int>> values_;
  std::vector<double> probs_;
};

// Deterministic draws (std distributions are implementation-defined).
std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a + 0x9E3779B97F4A7C15ULL * (b + 1);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}
std::size_t pick(std::mt19937_64& rng, std::size_t n) { return rng() % n; }
double unif(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

bool prob_tie_better(const Network& net, const GAssignment& cand, double pc,
                     const GAssignment& best, double pb) {
  if (pc != pb) return pc > pb;
  std::size_t sc = cand.proper_span().size(), sb = best.proper_span().size();
  if (sc != sb) return sc < sb;
  return cand.render(net) < best.render(net);
}

}  // namespace

Network random_network(const RandomNetSpec& spec, std::uint64_t trial) {
  std::mt19937_64 rng(mix(spec.seed, trial));
  RawNetwork raw;
  const int n = std::max(1, spec.nodeCount);
  std::vector<int> domSize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    RawVariable rv;
    rv.name = "n" + std::to_string(i);
    int span = spec.maxDomain - spec.minDomain + 1;
    int size = spec.minDomain + static_cast<int>(pick(rng, static_cast<std::size_t>(span)));
    domSize[static_cast<std::size_t>(i)] = size;
    for (int d = 0; d < size; ++d) rv.values.push_back("v" + std::to_string(d));

    // Parents among earlier nodes, so the graph is acyclic by construction.
    int maxP = std::min(spec.maxParents, i);
    int k = maxP > 0 ? static_cast<int>(pick(rng, static_cast<std::size_t>(maxP + 1))) : 0;
    std::vector<int> ids(static_cast<std::size_t>(i));
    for (int j = 0; j < i; ++j) ids[static_cast<std::size_t>(j)] = j;
    for (int j = 0; j < k; ++j) {
      std::size_t at = pick(rng, ids.size() - static_cast<std::size_t>(j));
      std::swap(ids[at], ids[ids.size() - 1 - static_cast<std::size_t>(j)]);
      rv.parents.push_back("n" + std::to_string(ids[ids.size() - 1 - static_cast<std::size_t>(j)]));
    }
    std::sort(rv.parents.begin(), rv.parents.end());

    std::vector<int> conceptValues;
    if (size >= 3 && unif(rng) < spec.conceptDensity) {
      int csize = 2 + static_cast<int>(pick(rng, static_cast<std::size_t>(size - 2)));
      std::vector<int> vals(static_cast<std::size_t>(size));
      for (int d = 0; d < size; ++d) vals[static_cast<std::size_t>(d)] = d;
      for (int j = 0; j < csize; ++j) {
        std::size_t at = pick(rng, vals.size() - static_cast<std::size_t>(j));
        std::swap(vals[at], vals[vals.size() - 1 - static_cast<std::size_t>(j)]);
        conceptValues.push_back(vals[vals.size() - 1 - static_cast<std::size_t>(j)]);
      }
      std::sort(conceptValues.begin(), conceptValues.end());
      RawConcept rc;
      rc.name = "c" + std::to_string(i);
      for (int d : conceptValues) rc.values.push_back("v" + std::to_string(d));
      rv.concepts.push_back(std::move(rc));
    }

    // Strictly positive rows, first parent most significant.
    std::vector<int> parentSizes;
    std::size_t rowCount = 1;
    for (const auto& pname : rv.parents) {
      int pid = std::stoi(pname.substr(1));
      parentSizes.push_back(domSize[static_cast<std::size_t>(pid)]);
      rowCount *= static_cast<std::size_t>(domSize[static_cast<std::size_t>(pid)]);
    }
    std::vector<std::vector<double>> rows(rowCount);
    for (auto& row : rows) {
      row.resize(static_cast<std::size_t>(size));
      double sum = 0.0;
      for (auto& p : row) {
        p = 0.05 + 0.95 * unif(rng);
        sum += p;
      }
      for (auto& p : row) p /= sum;
    }

    // Plant independence: copy rows across a block of one parent's values so
    // the child is locally constant there.
    if (!rv.parents.empty() && unif(rng) < spec.independencePlantRate) {
      std::size_t pk = pick(rng, rv.parents.size());
      int psize = parentSizes[pk];
      int parentId = std::stoi(rv.parents[pk].substr(1));
      const auto& parentConcepts = raw.variables[static_cast<std::size_t>(parentId)].concepts;
      std::vector<int> block;
      if (!parentConcepts.empty() && unif(rng) < 0.6) {
        // Align the constant block with the parent's concept so disjunctive
        // hypercubes with permissible sets actually arise.
        for (const auto& label : parentConcepts[0].values)
          block.push_back(std::stoi(label.substr(1)));
        std::sort(block.begin(), block.end());
      } else if (unif(rng) < 0.4) {
        block.resize(static_cast<std::size_t>(psize));
        for (int d = 0; d < psize; ++d) block[static_cast<std::size_t>(d)] = d;
      } else {
        int bsize = 2 + static_cast<int>(pick(rng, static_cast<std::size_t>(psize - 1)));
        std::vector<int> vals(static_cast<std::size_t>(psize));
        for (int d = 0; d < psize; ++d) vals[static_cast<std::size_t>(d)] = d;
        for (int j = 0; j < bsize; ++j) {
          std::size_t at = pick(rng, vals.size() - static_cast<std::size_t>(j));
          std::swap(vals[at], vals[vals.size() - 1 - static_cast<std::size_t>(j)]);
          block.push_back(vals[vals.size() - 1 - static_cast<std::size_t>(j)]);
        }
        std::sort(block.begin(), block.end());
      }
      std::size_t stride = 1;
      for (std::size_t j = pk + 1; j < parentSizes.size(); ++j)
        stride *= static_cast<std::size_t>(parentSizes[j]);
      for (std::size_t code = 0; code < rowCount; ++code) {
        int pv = static_cast<int>((code / stride) % static_cast<std::size_t>(psize));
        if (std::find(block.begin(), block.end(), pv) != block.end() && pv != block[0]) {
          std::size_t rep = code - stride * static_cast<std::size_t>(pv - block[0]);
          rows[code] = rows[rep];
        }
      }
    }

    for (std::size_t code = 0; code < rowCount; ++code) {
      RawCptRow rrow;
      std::size_t rem = code;
      for (std::size_t pk = rv.parents.size(); pk-- > 0;) {
        int pv = static_cast<int>(rem % static_cast<std::size_t>(parentSizes[pk]));
        rem /= static_cast<std::size_t>(parentSizes[pk]);
        rrow.given[rv.parents[pk]] = "v" + std::to_string(pv);
      }
      for (int d = 0; d < size; ++d)
        rrow.p["v" + std::to_string(d)] = rows[code][static_cast<std::size_t>(d)];
      rv.cpt.push_back(std::move(rrow));
    }
    raw.variables.push_back(std::move(rv));
  }
  return validate_network(raw);
}

std::vector<GAssignment> enumerate_gib_assignments(const Network& net,
                                                   const Evidence& evidence,
                                                   const EnumCaps& caps) {
  const int n = net.size();
  std::vector<std::vector<ValueSet>> options(static_cast<std::size_t>(n));
  double combos = 1.0;
  for (int v = 0; v < n; ++v) {
    auto ev = evidence.find(v);
    if (ev != evidence.end()) {
      options[static_cast<std::size_t>(v)] = {
          ValueSet::single(v, net.domain_size(v), static_cast<std::size_t>(ev->second))};
    } else {
      options[static_cast<std::size_t>(v)] = net.permissible_sets(v);
    }
    combos *= static_cast<double>(options[static_cast<std::size_t>(v)].size());
  }
  if (combos > caps.maxCombos)
    throw TooLarge("GIB enumeration needs " + std::to_string(combos) + " combinations");

  JointTable table(net);
  std::vector<GAssignment> out;
  GAssignment current;
  std::function<void(int)> rec = [&](int v) {
    if (v == n) {
      try {
        for (int w : current.proper_span())
          if (!table.gib_global(current, w, 1e-12)) return;
      } catch (const UndefinedConditional&) {
        return;  // zero-probability event, conditionals undefined
      }
      out.push_back(current);
      return;
    }
    for (const auto& s : options[static_cast<std::size_t>(v)]) {
      GAssignment saved = current;
      current.assign(v, s);
      rec(v + 1);
      current = std::move(saved);
    }
  };
  rec(0);
  return out;
}

Explanation gib_map_bruteforce(const Network& net, const Evidence& evidence,
                               const EnumCaps& caps) {
  auto all = enumerate_gib_assignments(net, evidence, caps);
  JointTable table(net);
  bool have = false;
  Explanation best;
  for (const auto& g : all) {
    double p = table.event_prob(g);
    if (p <= 0.0) continue;
    if (!have || prob_tie_better(net, g, p, best.assignment, best.probability)) {
      best.assignment = g;
      best.probability = p;
      have = true;
    }
  }
  if (!have) throw Error("NoExplanation", "no positive-probability GIB assignment");
  return best;
}

std::vector<std::pair<GAssignment, double>> refinement_conditionals(
    const Network& net, const GAssignment& a, int v, double cap) {
  const auto& anc = net.ancestors(v);
  GAssignment targetOnly;
  targetOnly.assign(v, a.get(net, v));
  std::vector<std::pair<GAssignment, double>> out;
  if (anc.empty()) return out;

  std::vector<std::vector<std::size_t>> members;
  double combos = 1.0;
  for (int w : anc) {
    members.push_back(a.get(net, w).values());
    if (members.back().size() > 20)
      throw TooLarge("refinement enumeration over a " +
                     std::to_string(members.back().size()) + "-value set");
    combos *= static_cast<double>((1u << members.back().size()) - 1);
  }
  if (combos > cap)
    throw TooLarge("refinement enumeration needs " + std::to_string(combos) + " subsets");

  std::vector<ValueSet> picked(anc.size());
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == anc.size()) {
      GAssignment b;
      for (std::size_t i = 0; i < anc.size(); ++i) b.assign(anc[i], picked[i]);
      double denom = joint_prob_exact(net, b);
      if (denom == 0.0) return;
      auto m = meet(net, targetOnly, b);
      double cond = m ? joint_prob_exact(net, *m) / denom : 0.0;
      out.emplace_back(std::move(b), cond);
      return;
    }
    const auto& vals = members[k];
    for (unsigned mask = 1; mask < (1u << vals.size()); ++mask) {
      ValueSet s(anc[k], net.domain_size(anc[k]));
      for (std::size_t j = 0; j < vals.size(); ++j)
        if (mask & (1u << j)) s.add(vals[j]);
      picked[k] = s;
      rec(k + 1);
    }
  };
  rec(0);
  return out;
}

std::vector<GibHypercube> maximal_gib_hypercubes_bruteforce(
    const Network& net, int v, const GAssignment& constraint, double delta,
    double eps, bool refineTarget) {
  const auto& parents = net.parents(v);
  ValueSet targetBound = constraint.get(net, v);
  std::vector<ValueSet> targets;
  if (refineTarget) {
    for (const auto& s : net.permissible_sets(v))
      if (s.subset_of(targetBound)) targets.push_back(s);
  } else {
    targets.push_back(targetBound);
  }
  std::vector<std::vector<ValueSet>> parentChoices;
  for (int w : parents) {
    std::vector<ValueSet> choices;
    for (const auto& s : net.permissible_sets(w))
      if (s.subset_of(constraint.get(net, w))) choices.push_back(s);
    parentChoices.push_back(std::move(choices));
  }

  struct Cand {
    ValueSet target;
    std::vector<ValueSet> parentSets;
  };
  std::vector<Cand> passing;
  std::vector<ValueSet> picked;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == parents.size()) {
      for (const auto& t : targets) {
        GAssignment a;
        a.assign(v, t);
        for (std::size_t i = 0; i < parents.size(); ++i) a.assign(parents[i], picked[i]);
        bool ok = delta == 0.0 ? gib_holds_local(net, a, v, eps)
                               : delta_gib_holds(net, a, v, delta);
        if (ok) passing.push_back(Cand{t, picked});
      }
      return;
    }
    for (const auto& s : parentChoices[k]) {
      picked.push_back(s);
      rec(k + 1);
      picked.pop_back();
    }
  };
  rec(0);

  std::vector<GibHypercube> out;
  for (const auto& c : passing) {
    bool dominated = false;
    for (const auto& d : passing) {
      bool refinesD = c.target.subset_of(d.target);
      for (std::size_t i = 0; refinesD && i < parents.size(); ++i)
        refinesD = c.parentSets[i].subset_of(d.parentSets[i]);
      bool same = c.target == d.target && c.parentSets == d.parentSets;
      if (refinesD && !same) {
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

bool TheoremReport::pass() const {
  return boundsExtremes.failed == 0 && localIffGlobal.failed == 0 &&
         productExact.failed == 0 && boundsContain.failed == 0 &&
         searchOptimal.failed == 0;
}

std::string TheoremReport::to_text() const {
  std::ostringstream os;
  os << "trials: " << trials << "\n";
  auto line = [&](const char* name, const AssertionStat& s) {
    os << name << ": checked=" << s.checked << " failed=" << s.failed << "\n";
  };
  line("a bounds-extremes", boundsExtremes);
  line("b local-iff-global", localIffGlobal);
  line("c product-exact", productExact);
  line("d bounds-contain", boundsContain);
  line("e search-optimal", searchOptimal);
  os << "f delta-local-vs-global: agree=" << deltaAgree << " disagree=" << deltaDisagree
     << "\n";
  if (!firstCounterexample.empty())
    os << "first counterexample: " << firstCounterexample << "\n";
  os << "result: " << (pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

nlohmann::ordered_json TheoremReport::to_json() const {
  nlohmann::ordered_json j;
  j["trials"] = trials;
  auto stat = [](const AssertionStat& s) {
    return nlohmann::ordered_json{{"checked", s.checked}, {"failed", s.failed}};
  };
  j["assertions"] = {{"bounds_extremes", stat(boundsExtremes)},
                     {"local_iff_global", stat(localIffGlobal)},
                     {"product_exact", stat(productExact)},
                     {"bounds_contain", stat(boundsContain)},
                     {"search_optimal", stat(searchOptimal)}};
  j["delta"] = {{"agree", deltaAgree}, {"disagree", deltaDisagree}};
  if (!firstCounterexample.empty()) j["first_counterexample"] = firstCounterexample;
  j["pass"] = pass();
  return j;
}

TheoremReport check_theorems(const RandomNetSpec& spec, int trials) {
  TheoremReport report;
  report.trials = trials;
  auto note = [&](const std::string& what) {
    if (report.firstCounterexample.empty()) report.firstCounterexample = what;
  };

  for (int t = 0; t < trials; ++t) {
    Network net = random_network(spec, static_cast<std::uint64_t>(t));
    std::mt19937_64 rng(mix(spec.seed ^ 0xABCDEF, static_cast<std::uint64_t>(t)));

    // Random G-assignment: full, a permissible set, or an arbitrary subset.
    GAssignment a;
    for (int v = 0; v < net.size(); ++v) {
      std::size_t kind = pick(rng, 3);
      if (kind == 0) continue;  // full
      if (kind == 1) {
        const auto& fam = net.permissible_sets(v);
        a.assign(v, fam[pick(rng, fam.size())]);
      } else {
        std::size_t size = net.domain_size(v);
        unsigned mask =
            1 + static_cast<unsigned>(pick(rng, (1u << size) - 1));
        ValueSet s(v, size);
        for (std::size_t j = 0; j < size; ++j)
          if (mask & (1u << j)) s.add(j);
        a.assign(v, s);
      }
    }
    int v = static_cast<int>(pick(rng, static_cast<std::size_t>(net.size())));

    // (a) + (d): refinement-enumerated extremes vs local bounds.
    auto conds = refinement_conditionals(net, a, v);
    Bounds bounds = local_bounds(net, v, a);
    if (!conds.empty()) {
      double lo = 2.0, hi = -1.0;
      bool contained = true;
      for (const auto& [b, c] : conds) {
        lo = std::min(lo, c);
        hi = std::max(hi, c);
        ++report.boundsContain.checked;
        if (c < bounds.lo - 1e-9 * std::max(1.0, bounds.lo) ||
            c > bounds.hi + 1e-9 * std::max(1.0, bounds.hi)) {
          ++report.boundsContain.failed;
          contained = false;
        }
      }
      ++report.boundsExtremes.checked;
      bool extremes = std::abs(lo - bounds.lo) <= 1e-9 * std::max(1.0, bounds.lo) &&
                      std::abs(hi - bounds.hi) <= 1e-9 * std::max(1.0, bounds.hi);
      if (!extremes) {
        ++report.boundsExtremes.failed;
        note("trial " + std::to_string(t) + ": bounds (" + fmt_prob(bounds.lo) + "," +
             fmt_prob(bounds.hi) + ") vs refinement extremes (" + fmt_prob(lo) + "," +
             fmt_prob(hi) + ") at " + net.var(v).name + " for {" + a.render(net) + "}");
      }
      if (!contained)
        note("trial " + std::to_string(t) + ": refinement conditional outside bounds at " +
             net.var(v).name);

      // (f) delta agreement, reported only.
      double delta = unif(rng);
      bool localDelta = delta_gib_holds(net, a, v, delta);
      bool globalDelta = lo >= (1.0 - delta) * hi;
      if (localDelta == globalDelta)
        ++report.deltaAgree;
      else
        ++report.deltaDisagree;
    }

    // (b) Theorem 2: local iff global.
    ++report.localIffGlobal.checked;
    bool local = gib_holds_local(net, a, v, 1e-12);
    bool global = gib_holds_global(net, a, v, 1e-12);
    if (local != global) {
      ++report.localIffGlobal.failed;
      note("trial " + std::to_string(t) + ": local=" + (local ? "true" : "false") +
           " global=" + (global ? "true" : "false") + " at " + net.var(v).name +
           " for {" + a.render(net) + "}");
    }

    // (c) Theorem 3 and (e) search optimality, on random evidence.
    int ev = static_cast<int>(pick(rng, static_cast<std::size_t>(net.size())));
    Evidence evidence{{ev, static_cast<int>(pick(rng, net.domain_size(ev)))}};
    auto gibs = enumerate_gib_assignments(net, evidence);
    for (const auto& g : gibs) {
      ++report.productExact.checked;
      double exact = joint_prob_exact(net, g);
      double product;
      try {
        product = gib_probability(net, g);
      } catch (const NotGib&) {
        ++report.productExact.failed;
        note("trial " + std::to_string(t) + ": global-GIB assignment {" + g.render(net) +
             "} fails the local product precondition");
        continue;
      }
      if (std::abs(product - exact) > 1e-9 * std::max(exact, 1e-300)) {
        ++report.productExact.failed;
        note("trial " + std::to_string(t) + ": product " + fmt_prob(product) +
             " != exact " + fmt_prob(exact) + " for {" + g.render(net) + "}");
      }
    }

    ++report.searchOptimal.checked;
    auto found = gib_map_search(net, evidence, SearchOptions{});
    Explanation truth = gib_map_bruteforce(net, evidence);
    if (found.empty() ||
        std::abs(found.front().probability - truth.probability) >
            1e-12 * std::max(truth.probability, 1e-300) ||
        found.front().assignment != truth.assignment) {
      ++report.searchOptimal.failed;
      note("trial " + std::to_string(t) + ": search {" +
           (found.empty() ? std::string("<none>") : found.front().assignment.render(net)) +
           "} vs brute force {" + truth.assignment.render(net) + "} p=" +
           fmt_prob(truth.probability));
    }
  }
  return report;
}

}  // namespace gibmap
