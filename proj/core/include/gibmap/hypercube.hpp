#ifndef GIBMAP_HYPERCUBE_HPP_
#define GIBMAP_HYPERCUBE_HPP_

#include <vector>

#include "gibmap/assign.hpp"
#include "gibmap/semantics.hpp"

namespace gibmap {

// A G-assignment spanning a node and its parents, with permissible sets,
// satisfying the (delta-)GIB condition at the node. `conditional` caches the
// common local conditional (the max bound when delta > 0).
struct GibHypercube {
  int base = -1;
  ValueSet target;
  std::vector<ValueSet> parentSets;  // declared parent order
  double conditional = 0.0;

  GAssignment to_assignment(const Network& net) const;
};

// BadSpan when the shape does not match base + its parents;
// ImpermissibleSet when some parent set is outside its M family.
bool is_gib_hypercube(const Network& net, const GibHypercube& h, double delta,
                      double eps = kDefaultEps);

// All GIB hypercubes based on v refining the constraint's restriction to
// {v} + parents(v), maximal (least refined) among such hypercubes. The
// target set is pinned to constraint(v) unless refineTarget. Breadth-first
// descent of the permissible-set product lattice, expanding only failing
// candidates; the result is an antichain in deterministic order.
std::vector<GibHypercube> maximal_gib_hypercubes(const Network& net, int v,
                                                 const GAssignment& constraint,
                                                 double delta, double eps,
                                                 bool refineTarget);

}  // namespace gibmap

#endif  // GIBMAP_HYPERCUBE_HPP_
