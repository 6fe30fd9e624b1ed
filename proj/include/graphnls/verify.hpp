#pragma once

#include <string>
#include <vector>

#include "graphnls/solver.hpp"

namespace graphnls {

struct CheckResult {
  std::string label;
  Real observed = 0;
  Real bound = 0;
  bool ok = false;
};

struct VerifyReport {
  std::string graph_name;
  std::vector<CheckResult> checks;
  bool all_ok = true;
};

/// Runs the identity/consistency battery on one graph: Nehari projection
/// exactness, the on-Nehari action identity, the multiplier/energy identity,
/// gradients vs central differences, rearrangement equimeasurability and
/// norm preservation, Dirichlet-norm non-increase under rearrangement, and
/// p-homogeneity of the norms. Deterministic given cfg.seed.
VerifyReport run_invariant_suite(const MetricGraph& g,
                                 const std::vector<Real>& ps,
                                 const SolverConfig& cfg);

/// True if symmetric rearrangement is structurally admissible (every point
/// is joined to "infinity"/boundary by two disjoint paths): circle, line,
/// and ladder among the named graphs.
bool symmetric_rearrangement_eligible(const MetricGraph& g);

}  // namespace graphnls
