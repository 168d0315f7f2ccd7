#include "gibmap/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace gibmap {
namespace {

constexpr double kRowSumTol = 1e-9;

ValueSet set_from_labels(const Variable& v, const std::vector<std::string>& labels,
                         const std::string& where) {
  ValueSet s(v.id, v.domain.size());
  for (const auto& label : labels) {
    auto it = std::find(v.domain.begin(), v.domain.end(), label);
    if (it == v.domain.end())
      throw BadConcept(where + ": value '" + label + "' not in domain of " + v.name);
    s.add(static_cast<std::size_t>(it - v.domain.begin()));
  }
  return s;
}

}  // namespace

int Network::id_of(const std::string& name) const {
  auto it = byName_.find(name);
  if (it == byName_.end()) throw UnknownVariable(name);
  return it->second;
}

int Network::value_index(int id, const std::string& label) const {
  const auto& dom = var(id).domain;
  auto it = std::find(dom.begin(), dom.end(), label);
  if (it == dom.end())
    throw UnknownValue("'" + label + "' not in domain of " + var(id).name);
  return static_cast<int>(it - dom.begin());
}

std::string Network::concept_name(const ValueSet& s) const {
  for (const auto& c : var(s.owner()).concepts) {
    if (c.values == s) return c.name;
  }
  return {};
}

RawNetwork Network::to_raw(bool keepConcepts) const {
  RawNetwork raw;
  for (const auto& v : vars_) {
    RawVariable rv;
    rv.name = v.name;
    rv.values = v.domain;
    for (int p : v.parents) rv.parents.push_back(vars_[p].name);
    if (keepConcepts) {
      for (const auto& c : v.concepts) {
        RawConcept rc;
        rc.name = c.name;
        for (std::size_t i : c.values.values()) rc.values.push_back(v.domain[i]);
        rv.concepts.push_back(std::move(rc));
      }
    }
    const Cpt& table = cpts_[v.id];
    std::vector<std::size_t> parentDom;
    for (int p : v.parents) parentDom.push_back(vars_[p].domain.size());
    for (std::size_t code = 0; code < table.rows.size(); ++code) {
      RawCptRow row;
      std::size_t rem = code;
      for (std::size_t k = v.parents.size(); k-- > 0;) {
        std::size_t val = rem % parentDom[k];
        rem /= parentDom[k];
        row.given[vars_[v.parents[k]].name] = vars_[v.parents[k]].domain[val];
      }
      for (std::size_t d = 0; d < v.domain.size(); ++d) {
        row.p[v.domain[d]] = table.rows[code][d];
      }
      rv.cpt.push_back(std::move(row));
    }
    raw.variables.push_back(std::move(rv));
  }
  return raw;
}

Network validate_network(const RawNetwork& raw, std::vector<std::string>* warnings) {
  Network net;
  const int n = static_cast<int>(raw.variables.size());

  // Names and domains.
  for (int i = 0; i < n; ++i) {
    const RawVariable& rv = raw.variables[i];
    if (net.byName_.count(rv.name))
      throw DuplicateName("variable '" + rv.name + "' declared twice");
    net.byName_[rv.name] = i;
    Variable v;
    v.id = i;
    v.name = rv.name;
    v.domain = rv.values;
    if (v.domain.size() < 2)
      throw BadDistribution("variable '" + rv.name + "' needs a domain of size >= 2");
    std::set<std::string> seen;
    for (const auto& label : v.domain) {
      if (!seen.insert(label).second)
        throw DuplicateName("value '" + label + "' repeated in domain of " + rv.name);
    }
    net.vars_.push_back(std::move(v));
  }

  // Parents.
  for (int i = 0; i < n; ++i) {
    const RawVariable& rv = raw.variables[i];
    std::set<int> seen;
    for (const auto& pname : rv.parents) {
      auto it = net.byName_.find(pname);
      if (it == net.byName_.end())
        throw UnknownParent("parent '" + pname + "' of " + rv.name + " is not declared");
      if (!seen.insert(it->second).second)
        throw UnknownParent("parent '" + pname + "' of " + rv.name + " repeated");
      net.vars_[i].parents.push_back(it->second);
    }
  }

  // Concepts: non-empty strict subsets, pairwise laminar.
  for (int i = 0; i < n; ++i) {
    Variable& v = net.vars_[i];
    std::set<std::string> cnames;
    for (const auto& rc : raw.variables[i].concepts) {
      if (!cnames.insert(rc.name).second)
        throw DuplicateName("concept '" + rc.name + "' of " + v.name + " declared twice");
      if (rc.values.empty())
        throw BadConcept("concept '" + rc.name + "' of " + v.name + " is empty");
      ValueSet s = set_from_labels(v, rc.values, "concept '" + rc.name + "'");
      if (s.is_full())
        throw BadConcept("concept '" + rc.name + "' of " + v.name +
                         " must be a strict subset of the domain");
      for (const auto& other : v.concepts) {
        ValueSet inter = s.intersect(other.values);
        if (!inter.empty() && !s.subset_of(other.values) && !other.values.subset_of(s))
          throw NonLaminarConcepts("concepts '" + rc.name + "' and '" + other.name +
                                   "' of " + v.name + " overlap without nesting");
      }
      v.concepts.push_back(Concept{rc.name, std::move(s)});
    }
  }

  // Index: sinks first, ties by declaration order. Stalling means a cycle.
  std::vector<int> pendingChildren(n, 0);
  for (const auto& v : net.vars_)
    for (int p : v.parents) ++pendingChildren[p];
  std::vector<bool> indexed(n, false);
  net.indexOf_.assign(n, 0);
  for (int k = 1; k <= n; ++k) {
    int picked = -1;
    for (int i = 0; i < n; ++i) {
      if (!indexed[i] && pendingChildren[i] == 0) {
        picked = i;
        break;
      }
    }
    if (picked < 0) throw CyclicGraph("parent relation has a cycle");
    indexed[picked] = true;
    net.indexOf_[picked] = k;
    net.order_.push_back(picked);
    for (int p : net.vars_[picked].parents) --pendingChildren[p];
  }

  // Ancestor closure, in descending index order so parents are ready first.
  net.ancestors_.assign(n, {});
  for (auto it = net.order_.rbegin(); it != net.order_.rend(); ++it) {
    std::set<int> anc;
    for (int p : net.vars_[*it].parents) {
      anc.insert(p);
      anc.insert(net.ancestors_[p].begin(), net.ancestors_[p].end());
    }
    net.ancestors_[*it].assign(anc.begin(), anc.end());
  }

  // CPTs.
  bool zeros = false;
  for (int i = 0; i < n; ++i) {
    const Variable& v = net.vars_[i];
    const RawVariable& rv = raw.variables[i];
    std::vector<std::size_t> parentDom;
    std::size_t rowCount = 1;
    for (int p : v.parents) {
      parentDom.push_back(net.vars_[p].domain.size());
      rowCount *= net.vars_[p].domain.size();
    }
    if (rv.cpt.size() != rowCount)
      throw BadDistribution("cpt of " + v.name + " has " + std::to_string(rv.cpt.size()) +
                            " rows, expected " + std::to_string(rowCount));
    Cpt table;
    table.owner = i;
    table.rows.assign(rowCount, {});
    std::vector<bool> filled(rowCount, false);
    for (const auto& rrow : rv.cpt) {
      if (rrow.given.size() != v.parents.size())
        throw BadDistribution("cpt row of " + v.name + " must condition exactly on its parents");
      std::vector<int> parentValues;
      for (std::size_t k = 0; k < v.parents.size(); ++k) {
        const Variable& pv = net.vars_[v.parents[k]];
        auto it = rrow.given.find(pv.name);
        if (it == rrow.given.end())
          throw BadDistribution("cpt row of " + v.name + " missing parent " + pv.name);
        parentValues.push_back(net.value_index(pv.id, it->second));
      }
      std::size_t code = table.row_code(parentValues, parentDom);
      if (filled[code])
        throw BadDistribution("cpt of " + v.name + " has a duplicate row");
      filled[code] = true;
      std::vector<double> dist(v.domain.size(), 0.0);
      double sum = 0.0;
      for (const auto& [label, prob] : rrow.p) {
        int d = net.value_index(i, label);
        if (!(prob >= 0.0 && prob <= 1.0) || !std::isfinite(prob))
          throw BadDistribution("cpt of " + v.name + ": P(" + label + ") = " +
                                std::to_string(prob) + " outside [0,1]");
        dist[static_cast<std::size_t>(d)] = prob;
        sum += prob;
      }
      if (std::abs(sum - 1.0) > kRowSumTol)
        throw BadDistribution("cpt row of " + v.name + " sums to " + std::to_string(sum));
      for (double p : dist)
        if (p == 0.0) zeros = true;
      table.rows[code] = std::move(dist);
    }
    net.cpts_.push_back(std::move(table));
  }
  net.positive_ = !zeros;
  if (zeros && warnings) {
    warnings->push_back(
        "zero probabilities present; conditionals on zero-probability events are undefined");
  }

  // Permissible families: singletons, concepts, full domain (deduplicated).
  net.permissible_.assign(n, {});
  for (int i = 0; i < n; ++i) {
    const Variable& v = net.vars_[i];
    std::vector<ValueSet> fam;
    for (std::size_t d = 0; d < v.domain.size(); ++d)
      fam.push_back(ValueSet::single(i, v.domain.size(), d));
    for (const auto& c : v.concepts) fam.push_back(c.values);
    fam.push_back(ValueSet::full(i, v.domain.size()));
    std::sort(fam.begin(), fam.end());
    fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
    net.permissible_[i] = std::move(fam);
  }

  return net;
}

Network strip_concepts(const Network& net) {
  return validate_network(net.to_raw(/*keepConcepts=*/false));
}

}  // namespace gibmap
