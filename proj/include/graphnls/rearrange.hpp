#pragma once

#include "graphnls/mesh.hpp"

namespace graphnls {

/// Piecewise-linear rearranged profile: x increasing, values nonnegative
/// (monotone decreasing for the R+ case, even-decreasing for the R case).
struct RearrangedProfile {
  std::vector<Real> x;
  std::vector<Real> value;
};

enum class RearrangementKind { Monotone, Symmetric };

/// Decreasing rearrangement onto [0, |G|]: same distribution function,
/// computed from exact superlevel-set measures on a grid of `samples`
/// levels. Input must be nonnegative (below -1e-12 * max rejected).
RearrangedProfile monotone_rearrangement(const GraphFunction& u, int samples);

/// Even rearrangement onto [-|G|/2, |G|/2], equimeasurable with u.
RearrangedProfile symmetric_rearrangement(const GraphFunction& u, int samples);

Real profile_measure_above(const RearrangedProfile& r, Real level);
Real profile_l2_sq(const RearrangedProfile& r);
Real profile_lp_p(const RearrangedProfile& r, Real p);
Real profile_dirichlet_sq(const RearrangedProfile& r);

struct PolyaSzegoResult {
  Real lhs = 0;  // Dirichlet norm of the rearrangement
  Real rhs = 0;  // Dirichlet norm of u
  bool holds = false;
};

/// Checks ||(u*)'||^2 <= ||u'||^2. For the symmetric kind the inequality is
/// only expected when u attains a.e. value at least twice; the check reports,
/// it does not prove.
PolyaSzegoResult polya_szego_check(const GraphFunction& u,
                                   RearrangementKind kind, int samples = 0);

/// Exact measure of {u > t} for the piecewise-linear u.
Real measure_above(const GraphFunction& u, Real level);

}  // namespace graphnls
