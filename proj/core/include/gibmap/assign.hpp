#ifndef GIBMAP_ASSIGN_HPP_
#define GIBMAP_ASSIGN_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gibmap/model.hpp"
#include "gibmap/valueset.hpp"

namespace gibmap {

// One value per variable in some span.
struct CompleteAssignment {
  std::map<int, int> values;  // variable id -> value index
};

// A generalized assignment: a non-empty value set per variable. Variables
// absent from the map implicitly carry their full domain; full-domain
// entries are never stored, so equality on the map is equality on the
// implicit total map.
class GAssignment {
 public:
  GAssignment() = default;

  // Drops the entry when `s` is the full domain. Empty sets are rejected.
  void assign(int v, const ValueSet& s);

  ValueSet get(const Network& net, int v) const;
  bool properly_assigns(int v) const { return entries_.count(v) != 0; }

  // Variables assigned a strict subset of their domain, ascending id.
  std::vector<int> proper_span() const;
  const std::map<int, ValueSet>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  GAssignment restrict_to(const std::set<int>& vars) const;
  GAssignment restrict_to(const std::vector<int>& vars) const;

  // Full-domain entries are already dropped on assign; kept as an explicit
  // operation for callers holding denormalized inputs.
  GAssignment compact() const { return *this; }

  // name=val1|val2 entries in declaration order, concept names substituted.
  std::string render(const Network& net) const;

  friend bool operator==(const GAssignment& a, const GAssignment& b) {
    return a.entries_ == b.entries_;
  }
  friend bool operator!=(const GAssignment& a, const GAssignment& b) {
    return !(a == b);
  }
  friend bool operator<(const GAssignment& a, const GAssignment& b) {
    return a.entries_ < b.entries_;
  }

 private:
  std::map<int, ValueSet> entries_;
};

// b refines a: b's set is a subset of a's at every variable.
bool refines(const Network& net, const GAssignment& b, const GAssignment& a);
bool strictly_refines(const Network& net, const GAssignment& b, const GAssignment& a);

// f picks a member of a's set at every variable a properly assigns.
// SpanMismatch when f leaves such a variable without a value.
bool includes(const Network& net, const CompleteAssignment& f, const GAssignment& a);

// Per-variable intersection; nullopt when some intersection is empty
// (callers prune such candidates).
std::optional<GAssignment> meet(const Network& net, const GAssignment& a,
                                const GAssignment& b);

// Rendering of one value set (concept substitution, domain order).
std::string render_set(const Network& net, const ValueSet& s);

GAssignment singleton_assignment(const Network& net, const CompleteAssignment& f);

}  // namespace gibmap

#endif  // GIBMAP_ASSIGN_HPP_
