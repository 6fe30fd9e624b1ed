#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "graphnls/functionals.hpp"
#include "graphnls/mesh.hpp"

namespace graphnls {

struct SolverConfig {
  Real target_h = 0.05;
  Real grad_tol = 1e-7;   // relative: scaled by (1 + |lambda|) ||u||
  Real mass_tol = 1e-2;   // mass satisfaction, M+- distinctness, blow-up gate
  int max_iters = 20000;
  Real step_min = 1e-10;
  Real step_max = 1e4;
  Real armijo_c = 1e-4;
  int restarts = 8;
  unsigned long long seed = 12345;
  Real lambda_tol = 1e-2;   // Lambda+- distinctness
  Real energy_tol = 1e-4;   // near-optimal band for energy multistart
  Real action_tol = 1e-4;   // near-optimal band for action multistart
  Real resolve_factor = 0.1;  // per-point mesh refinement: h <= factor/sqrt(lambda)
  int threads = 0;            // 0: GRAPHNLS_THREADS env or 1
};

/// Thrown when the p >= 6 energy flow dives below -1/mass_tol with a growing
/// sup norm, the discrete signature of an unbounded-below problem.
struct UnboundedBelowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GroundStateRecord {
  GraphFunction state;
  Real mass = 0;
  Real lambda = 0;  // multiplier recovered from the state
  Real energy = 0;
  Real action_at_lambda = 0;
  Real grad_norm = 0;
  Real nlse_interior_residual = 0;
  Real kirchhoff_residual = 0;
  int restarts_used = 0;  // index of the initial guess that produced this
  int iterations = 0;
  bool converged = false;
};

struct ActionRecord {
  GraphFunction state;  // Nehari-projected
  Real lambda = 0;
  Real mass = 0;
  Real action = 0;
  Real lp_norm_p = 0;
  Real grad_norm = 0;
  Real nlse_interior_residual = 0;
  Real kirchhoff_residual = 0;
  int restarts_used = 0;
  int iterations = 0;
  bool converged = false;
};

/// Projected gradient descent on the mass sphere ||u||_2^2 = mu (normalized
/// gradient flow): Sobolev-preconditioned Barzilai-Borwein steps, Armijo
/// backtracking, monotone energy decrease.
GroundStateRecord minimize_energy(MeshPtr mesh, Real p, Real mu,
                                  const SolverConfig& cfg,
                                  const GraphFunction& init);

struct EnergyMultistart {
  std::vector<GroundStateRecord> records;  // sorted by initial-guess index
  Real best_energy = 0;
  Real lambda_minus = 0;  // min multiplier over near-optimal records
  Real lambda_plus = 0;   // max multiplier over near-optimal records
  int n_near_optimal = 0;
  bool any_converged = false;
};

EnergyMultistart multistart_energy(MeshPtr mesh, Real p, Real mu,
                                   const SolverConfig& cfg,
                                   const std::vector<GraphFunction>& extra_inits = {});
EnergyMultistart multistart_energy(const MetricGraph& g, Real p, Real mu,
                                   const SolverConfig& cfg);

/// Descent on the reduced functional u -> J(sigma(u) u): every iterate is
/// projected back onto the Nehari manifold, where the reduced and plain
/// action gradients coincide. Requires lambda > 0 (the level is 0 and not
/// attained otherwise).
ActionRecord minimize_action(MeshPtr mesh, Real p, Real lambda,
                             const SolverConfig& cfg,
                             const GraphFunction& init);

struct ActionMultistart {
  std::vector<ActionRecord> records;
  Real j_level = 0;   // best action found
  Real m_minus = 0;   // min mass over near-optimal records
  Real m_plus = 0;    // max mass over near-optimal records
  int n_near_optimal = 0;
  bool any_converged = false;
};

ActionMultistart multistart_action(MeshPtr mesh, Real p, Real lambda,
                                   const SolverConfig& cfg,
                                   const std::vector<GraphFunction>& extra_inits = {});
ActionMultistart multistart_action(const MetricGraph& g, Real p, Real lambda,
                                   const SolverConfig& cfg);

/// u_lambda(x) = lambda^{-1/4} u(x / sqrt(lambda)) on sqrt(lambda) G. With
/// the default mesh (target_h scaled by sqrt(lambda)) the transport is
/// node-exact and preserves the discrete L2 norm.
GraphFunction scaling_transport(const GraphFunction& u, Real lambda);
GraphFunction scaling_transport(const GraphFunction& u, Real lambda,
                                MeshPtr target);

/// Deterministic initial families for the multistarts: the constant state,
/// one bump per vertex, one bump per edge midpoint, seeded random fields.
/// Capped/padded to cfg.restarts entries.
std::vector<GraphFunction> energy_initial_family(MeshPtr mesh, Real p, Real mu,
                                                 const SolverConfig& cfg);
std::vector<GraphFunction> action_initial_family(MeshPtr mesh, Real p,
                                                 Real lambda,
                                                 const SolverConfig& cfg);

/// Soliton-shaped bump exp-localized around a mesh node, via graph distance.
GraphFunction bump_at(MeshPtr mesh, int edge, int local_node, Real p,
                      Real lambda_scale);

int worker_count(const SolverConfig& cfg);

}  // namespace graphnls
