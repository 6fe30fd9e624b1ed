#pragma once

#include "graphnls/mesh.hpp"

namespace graphnls {

struct FunctionalValue {
  Real energy = 0;
  Real action = 0;
  Real mass = 0;
  Real lp_norm_p = 0;
  Real h1_seminorm_sq = 0;
};

/// E_p(u) = 1/2 ||u'||_2^2 - 1/p ||u||_p^p
Real energy(const GraphFunction& u, Real p);

/// J_{p,lambda}(u) = 1/2 ||u'||_2^2 + lambda/2 ||u||_2^2 - 1/p ||u||_p^p
Real action(const GraphFunction& u, Real p, Real lambda);

FunctionalValue evaluate(const GraphFunction& u, Real p, Real lambda);

/// Multiplier of a critical point: (||u||_p^p - ||u'||_2^2) / ||u||_2^2.
Real lagrange_lambda(const GraphFunction& u, Real p);

/// Nehari scaling factor ((||u'||^2 + lambda ||u||^2) / ||u||_p^p)^{1/(p-2)};
/// sigma * u has zero Nehari residual up to round-off.
Real sigma(const GraphFunction& u, Real p, Real lambda);

/// ||u'||_2^2 + lambda ||u||_2^2 - ||u||_p^p
Real nehari_residual(const GraphFunction& u, Real p, Real lambda);

/// L2-Riesz (mass-lumped) gradients: grad = M^{-1} A u - |u|^{p-2} u, plus
/// lambda u for the action. Step sizes built on these are mesh-independent.
GraphFunction grad_energy(const GraphFunction& u, Real p);
GraphFunction grad_action(const GraphFunction& u, Real p, Real lambda);

}  // namespace graphnls
