#include "gibmap/assign.hpp"

#include <sstream>

namespace gibmap {

void GAssignment::assign(int v, const ValueSet& s) {
  if (s.empty()) throw Error("EmptySet", "cannot assign an empty value set");
  if (s.is_full()) {
    entries_.erase(v);  // canonical form: full domain == unassigned
  } else {
    entries_.insert_or_assign(v, s);
  }
}

ValueSet GAssignment::get(const Network& net, int v) const {
  auto it = entries_.find(v);
  if (it != entries_.end()) return it->second;
  return net.full_set(v);
}

std::vector<int> GAssignment::proper_span() const {
  std::vector<int> out;
  out.reserve(entries_.size());
  for (const auto& [v, s] : entries_) out.push_back(v);
  return out;
}

GAssignment GAssignment::restrict_to(const std::set<int>& vars) const {
  GAssignment out;
  for (const auto& [v, s] : entries_)
    if (vars.count(v)) out.entries_.emplace(v, s);
  return out;
}

GAssignment GAssignment::restrict_to(const std::vector<int>& vars) const {
  return restrict_to(std::set<int>(vars.begin(), vars.end()));
}

std::string render_set(const Network& net, const ValueSet& s) {
  std::string cname = net.concept_name(s);
  if (!cname.empty()) return cname;
  const auto& dom = net.var(s.owner()).domain;
  std::string out;
  for (std::size_t i : s.values()) {
    if (!out.empty()) out += '|';
    out += dom[i];
  }
  return out;
}

std::string GAssignment::render(const Network& net) const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, s] : entries_) {
    if (!first) os << ", ";
    first = false;
    os << net.var(v).name << '=' << render_set(net, s);
  }
  return os.str();
}

bool refines(const Network& net, const GAssignment& b, const GAssignment& a) {
  // Only a's properly assigned variables can fail: elsewhere a's set is full.
  for (const auto& [v, sa] : a.entries()) {
    if (!b.get(net, v).subset_of(sa)) return false;
  }
  return true;
}

bool strictly_refines(const Network& net, const GAssignment& b, const GAssignment& a) {
  return refines(net, b, a) && b != a;
}

bool includes(const Network& net, const CompleteAssignment& f, const GAssignment& a) {
  for (const auto& [v, s] : a.entries()) {
    auto it = f.values.find(v);
    if (it == f.values.end())
      throw SpanMismatch("complete assignment leaves " + net.var(v).name + " unassigned");
    if (!s.contains(static_cast<std::size_t>(it->second))) return false;
  }
  return true;
}

std::optional<GAssignment> meet(const Network& net, const GAssignment& a,
                                const GAssignment& b) {
  GAssignment out = a;
  for (const auto& [v, sb] : b.entries()) {
    ValueSet inter = out.get(net, v).intersect(sb);
    if (inter.empty()) return std::nullopt;
    out.assign(v, inter);
  }
  return out;
}

GAssignment singleton_assignment(const Network& net, const CompleteAssignment& f) {
  GAssignment out;
  for (const auto& [v, d] : f.values)
    out.assign(v, ValueSet::single(v, net.domain_size(v), static_cast<std::size_t>(d)));
  return out;
}

}  // namespace gibmap
