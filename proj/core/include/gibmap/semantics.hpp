#ifndef GIBMAP_SEMANTICS_HPP_
#define GIBMAP_SEMANTICS_HPP_

#include "gibmap/assign.hpp"
#include "gibmap/model.hpp"

namespace gibmap {

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;
};

inline constexpr double kDefaultJointCap = 1e7;
inline constexpr double kDefaultEps = 1e-9;

// P(v in set | d), read off the CPT row for the complete parent assignment d.
// Defined syntactically even when d has zero prior probability.
double cond_value_set_prob(const Network& net, int v, const ValueSet& set,
                           const CompleteAssignment& d);

// Exact event probability by enumeration of included complete assignments
// (chain-rule product per term). TooLarge when the term count exceeds cap.
double joint_prob_exact(const Network& net, const GAssignment& a,
                        double cap = kDefaultJointCap);

// joint(meet(target, given)) / joint(given). UndefinedConditional when the
// conditioning event has probability 0; an empty meet yields 0.
double cond_prob_exact(const Network& net, const GAssignment& target,
                       const GAssignment& given, double cap = kDefaultJointCap);

// (min, max) of P(a(v) | d) over complete parent assignments d included in
// a's restriction to the parents of v.
Bounds local_bounds(const Network& net, int v, const GAssignment& a);

// Local independence check: bounds coincide within a relative tolerance.
// Vacuously true for root nodes and full-domain sets.
bool gib_holds_local(const Network& net, const GAssignment& a, int v,
                     double eps = kDefaultEps);

// Ground-truth independence check against refinements of a over the
// ancestors of v. Enumerates the complete ancestor assignments included in
// a (the extreme points; any refinement's conditional is a convex
// combination of theirs) and requires all defined conditionals to agree
// within relTol. Zero-probability conditioning points are skipped.
bool gib_holds_global(const Network& net, const GAssignment& a, int v,
                      double relTol = 1e-12, double cap = kDefaultJointCap);

// lo >= (1 - delta) * hi on the local bounds. delta=0 recovers the exact
// local check; delta=1 always holds.
bool delta_gib_holds(const Network& net, const GAssignment& a, int v, double delta);

// Product over the proper span of the common local conditional. NotGib when
// the local check fails at some spanned variable.
double gib_probability(const Network& net, const GAssignment& a,
                       double eps = kDefaultEps);

// (prod lo, prod hi) over the proper span; brackets the exact probability.
// NotDeltaGib when the delta check fails at some spanned variable.
Bounds delta_prob_bounds(const Network& net, const GAssignment& a, double delta);

// CPT-row scan instrumentation (thread local), for complexity assertions.
long row_scan_count();
void reset_row_scan_count();

}  // namespace gibmap

#endif  // GIBMAP_SEMANTICS_HPP_
