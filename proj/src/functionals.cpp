#include "graphnls/functionals.hpp"

#include <cmath>
#include <stdexcept>

namespace graphnls {

Real energy(const GraphFunction& u, Real p) {
  return 0.5 * seminorm_h1_sq(u) - norm_lp_p(u, p) / p;
}

Real action(const GraphFunction& u, Real p, Real lambda) {
  return 0.5 * seminorm_h1_sq(u) + 0.5 * lambda * norm_l2_sq(u) -
         norm_lp_p(u, p) / p;
}

FunctionalValue evaluate(const GraphFunction& u, Real p, Real lambda) {
  FunctionalValue f;
  f.mass = norm_l2_sq(u);
  f.lp_norm_p = norm_lp_p(u, p);
  f.h1_seminorm_sq = seminorm_h1_sq(u);
  f.energy = 0.5 * f.h1_seminorm_sq - f.lp_norm_p / p;
  f.action = f.energy + 0.5 * lambda * f.mass;
  return f;
}

Real lagrange_lambda(const GraphFunction& u, Real p) {
  Real mass = norm_l2_sq(u);
  if (!(mass > 0)) throw std::invalid_argument("lagrange_lambda: zero mass");
  return (norm_lp_p(u, p) - seminorm_h1_sq(u)) / mass;
}

Real sigma(const GraphFunction& u, Real p, Real lambda) {
  Real q = seminorm_h1_sq(u) + lambda * norm_l2_sq(u);
  Real lp = norm_lp_p(u, p);
  if (!(lp > 0)) throw std::invalid_argument("sigma: ||u||_p vanishes");
  if (!(q > 0))
    throw std::domain_error(
        "sigma: ||u'||^2 + lambda ||u||^2 is not positive");
  return std::pow(q / lp, 1.0 / (p - 2));
}

Real nehari_residual(const GraphFunction& u, Real p, Real lambda) {
  return seminorm_h1_sq(u) + lambda * norm_l2_sq(u) - norm_lp_p(u, p);
}

namespace {

Vector nodal_power(const Vector& v, Real p) {
  return v.array().abs().pow(p - 2) * v.array();
}

}  // namespace

GraphFunction grad_energy(const GraphFunction& u, Real p) {
  GraphFunction g;
  g.mesh = u.mesh;
  g.values = (u.mesh->stiffness() * u.values).cwiseQuotient(
                 u.mesh->lumped_mass()) -
             nodal_power(u.values, p);
  return g;
}

GraphFunction grad_action(const GraphFunction& u, Real p, Real lambda) {
  GraphFunction g = grad_energy(u, p);
  g.values += lambda * u.values;
  return g;
}

}  // namespace graphnls
