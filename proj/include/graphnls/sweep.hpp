#pragma once

#include <optional>
#include <utility>

#include "graphnls/solver.hpp"

namespace graphnls {

enum class BranchAxis { Lambda, Mass };

struct BranchPoint {
  Real x = 0;              // grid value (lambda or mass)
  Real level = 0;          // j_level or best energy
  Real branch_minus = 0;   // M- or Lambda-
  Real branch_plus = 0;    // M+ or Lambda+
  int n_restarts = 0;
  int n_near_optimal = 0;
  bool converged = false;  // at least one converged restart, no blow-up flag
  bool flagged = false;    // solver failure or blow-up at this point
};

struct BranchTable {
  BranchAxis axis = BranchAxis::Lambda;
  std::string graph_name;
  Real p = 0;
  std::vector<Real> grid;
  std::vector<BranchPoint> points;
};

/// Per-point multistart_action over an increasing lambda grid, warm-started
/// from the previous point's near-optimal states (continuation) on top of
/// the standard initial family. The per-point mesh obeys
/// h <= resolve_factor / sqrt(lambda).
BranchTable trace_action_branch(const MetricGraph& g, Real p,
                                const std::vector<Real>& lambda_grid,
                                const SolverConfig& cfg);

/// Per-point multistart_energy over an increasing mass grid, with the same
/// continuation scheme. Points where the p >= 6 flow is unbounded below are
/// flagged and the sweep continues.
BranchTable trace_energy_branch(const MetricGraph& g, Real p,
                                const std::vector<Real>& mass_grid,
                                const SolverConfig& cfg);

/// Branch inversion: lambda1 < lambda2 with M-(lambda1) - M+(lambda2) >=
/// margin, the mass-inversion criterion that forces a Lambda jump.
struct InversionWitness {
  Real lambda1 = 0, lambda2 = 0;
  Real m_minus_at_1 = 0, m_plus_at_2 = 0;
  Real margin = 0;  // m_minus_at_1 - m_plus_at_2
};

/// Scans ordered pairs of converged points of a lambda-axis table; returns
/// the pair maximizing the gap, or nothing. Pure post-processing.
std::optional<InversionWitness> find_inversion(const BranchTable& table,
                                               Real margin);

struct ZPointWitness {
  Real p = 0;
  Real mass = 0;
  Real lambda_low = 0, lambda_high = 0;  // distinct multipliers found
  Real energy_gap = 0;                   // energy spread across them
};

/// Bisection over mass for points where multistart_energy returns distinct
/// multipliers (lambda gap > lambda_tol) at nearly equal energy (spread <
/// energy_tol). Each witness is re-verified by a fresh multistart with a
/// different seed. Empty result is a valid outcome.
std::vector<ZPointWitness> find_z_points(const MetricGraph& g, Real p,
                                         std::pair<Real, Real> mass_window,
                                         const SolverConfig& cfg);

struct DerivativePoint {
  Real x = 0;
  Real slope = 0;    // centered difference of the level column
  Real band_lo = 0;  // branch_minus / 2
  Real band_hi = 0;  // branch_plus / 2
  bool ok = false;
  bool skipped = false;  // neighbor not converged
};

struct DerivativeReport {
  std::vector<DerivativePoint> points;
  bool all_ok = true;
};

/// Checks the derivative relation: centered differences of the action level
/// against [M-/2, M+/2] bands, within rel_tol of the band center.
DerivativeReport derivative_consistency(const BranchTable& table,
                                        Real rel_tol = 0.02);

}  // namespace graphnls
