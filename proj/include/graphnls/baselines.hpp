#pragma once

#include "graphnls/mesh.hpp"

namespace graphnls {

/// Critical mass on the line: sqrt(3) pi / 2.
Real mu_line();
/// Critical mass on the half-line: mu_line() / 2.
Real mu_halfline();

/// The L2-critical soliton profile sqrt(sqrt(3) sech(2|x|)); unique positive
/// H^1(R) solution of u'' + u^5 = u with max at the origin.
Real phi1(Real x);

/// lambda^{1/4} phi1(sqrt(lambda) x); its restriction to x >= 0.
Real soliton(Real lambda, Real x);
Real half_soliton(Real lambda, Real x);

/// Critical mass mu_G at p = 6: mu_halfline if the graph has a pendant (or
/// is half-line-like), mu_line otherwise.
Real critical_mass(const MetricGraph& g);

/// Action ground-state levels at p = 6: (mu/2) lambda.
Real j6_line(Real lambda);
Real j6_halfline(Real lambda);

/// Limit profile of the small-lambda ladder regime, phi1(sqrt(3/2) x), and
/// the corresponding mass limit sqrt(6) mu_line.
Real phi_tilde(Real x);
Real ladder_limit_mass();

struct ConstantState {
  GraphFunction u;
  Real energy = 0;  // -mu^{p/2} / (p |G|^{p/2 - 1})
  Real lambda = 0;  // (mu / |G|)^{(p-2)/2}
};

/// The constant competitor kappa_mu = sqrt(mu / |G|) on a compact graph.
ConstantState constant_state(MeshPtr mesh, Real mu, Real p);

}  // namespace graphnls
