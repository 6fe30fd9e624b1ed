#include "graphnls/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace graphnls {

Real mu_line() { return std::sqrt(3.0) * M_PI / 2; }
Real mu_halfline() { return mu_line() / 2; }

Real phi1(Real x) {
  Real y = 2 * std::abs(x);
  if (y > 700) return 0;  // sech underflows
  return std::sqrt(std::sqrt(3.0) / std::cosh(y));
}

Real soliton(Real lambda, Real x) {
  if (!(lambda > 0)) throw std::invalid_argument("soliton: lambda must be > 0");
  return std::pow(lambda, 0.25) * phi1(std::sqrt(lambda) * x);
}

Real half_soliton(Real lambda, Real x) { return soliton(lambda, x); }

Real critical_mass(const MetricGraph& g) {
  if (is_compact(g)) return has_pendant(g) ? mu_halfline() : mu_line();
  if (has_pendant(g)) return mu_halfline();
  // no pendant, not compact: a lone half-line concentrates like R+,
  // anything larger like R
  int half_lines = 0, bounded = 0;
  for (const Edge& e : g.edges())
    e.is_half_line() ? ++half_lines : ++bounded;
  if (half_lines == 1 && bounded == 0) return mu_halfline();
  return mu_line();
}

Real j6_line(Real lambda) {
  if (!(lambda > 0)) throw std::invalid_argument("j6_line: lambda must be > 0");
  return mu_line() / 2 * lambda;
}

Real j6_halfline(Real lambda) {
  if (!(lambda > 0))
    throw std::invalid_argument("j6_halfline: lambda must be > 0");
  return mu_halfline() / 2 * lambda;
}

Real phi_tilde(Real x) { return phi1(std::sqrt(1.5) * x); }

Real ladder_limit_mass() { return std::sqrt(6.0) * mu_line(); }

ConstantState constant_state(MeshPtr mesh, Real mu, Real p) {
  const MetricGraph& g = mesh->graph();
  if (!is_compact(g))
    throw std::invalid_argument("constant_state: graph must be compact");
  if (!g.dirichlet_vertices().empty())
    throw std::invalid_argument(
        "constant_state: graph has Dirichlet truncation vertices");
  if (!(mu > 0)) throw std::invalid_argument("constant_state: mu must be > 0");
  Real total = g.total_length();
  Real kappa = std::sqrt(mu / total);
  ConstantState c;
  c.u = zero_function(mesh);
  c.u.values.setConstant(kappa);
  c.energy = -std::pow(mu, p / 2) / (p * std::pow(total, p / 2 - 1));
  c.lambda = std::pow(mu / total, (p - 2) / 2);
  return c;
}

}  // namespace graphnls
