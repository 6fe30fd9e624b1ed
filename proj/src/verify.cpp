#include "graphnls/verify.hpp"

#include <cmath>
#include <random>

#include "graphnls/rearrange.hpp"

namespace graphnls {

bool symmetric_rearrangement_eligible(const MetricGraph& g) {
  std::string base = g.name.substr(0, g.name.find('('));
  return base == "circle" || base == "line" || base == "ladder";
}

namespace {

GraphFunction positive_random(MeshPtr mesh, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> unif(0.1, 1.0);
  GraphFunction u = zero_function(mesh);
  for (Index i = 0; i < u.values.size(); ++i) u.values[i] = unif(rng);
  return u;
}

GraphFunction direction(MeshPtr mesh, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> unif(-1.0, 1.0);
  GraphFunction v = zero_function(mesh);
  for (Index i = 0; i < v.values.size(); ++i) v.values[i] = unif(rng);
  return v;
}

}  // namespace

VerifyReport run_invariant_suite(const MetricGraph& g,
                                 const std::vector<Real>& ps,
                                 const SolverConfig& cfg) {
  VerifyReport rep;
  rep.graph_name = g.name.empty() ? "custom" : g.name;
  MeshPtr mesh = build_mesh(g, cfg.target_h);
  const Vector& m = mesh->lumped_mass();

  auto add = [&](const std::string& label, Real observed, Real bound) {
    bool ok = observed <= bound;
    rep.checks.push_back({label, observed, bound, ok});
    rep.all_ok = rep.all_ok && ok;
  };

  std::vector<GraphFunction> testers;
  testers.push_back(bump_at(mesh, 0, mesh->edge_mesh(0).nodes / 2, 4.0, 4.0));
  testers.push_back(positive_random(mesh, cfg.seed));
  {
    GraphFunction two = testers[0];
    int last = static_cast<int>(g.edges().size()) - 1;
    GraphFunction other =
        bump_at(mesh, last, mesh->edge_mesh(last).nodes / 3, 4.0, 9.0);
    two.values += 0.7 * other.values;
    testers.push_back(std::move(two));
  }

  int tag = 0;
  for (Real p : ps) {
    for (size_t t = 0; t < testers.size(); ++t) {
      const GraphFunction& u = testers[t];
      std::string id = "p=" + std::to_string(p) + " u" + std::to_string(t);
      Real lambda = 1.0;

      // Nehari projection exactness and the on-manifold action identity
      GraphFunction w = u;
      w.values *= sigma(u, p, lambda);
      Real q = seminorm_h1_sq(w) + lambda * norm_l2_sq(w);
      add("nehari projection " + id, std::abs(nehari_residual(w, p, lambda)),
          1e-10 * q);
      Real lhs = action(w, p, lambda);
      Real rhs = (0.5 - 1.0 / p) * norm_lp_p(w, p);
      Real rhs2 = (0.5 - 1.0 / p) * q;
      add("action identity on Nehari " + id, std::abs(lhs - rhs),
          1e-8 * std::abs(rhs));
      add("action identity (gradient form) " + id, std::abs(lhs - rhs2),
          1e-8 * std::abs(rhs2));

      // multiplier/energy identity: lambda_hat mu = (1 - 2/p)||u||_p^p - 2E
      Real lam_hat = lagrange_lambda(u, p);
      Real mass = norm_l2_sq(u);
      Real idl = lam_hat * mass;
      Real idr = (1 - 2 / p) * norm_lp_p(u, p) - 2 * energy(u, p);
      add("multiplier identity " + id, std::abs(idl - idr),
          1e-10 * std::max(std::abs(idr), Real(1)));

      // gradient vs central difference
      GraphFunction v = direction(mesh, cfg.seed + 17 * (++tag));
      Real eps = 1e-5;
      GraphFunction up = u, um = u;
      up.values += eps * v.values;
      um.values -= eps * v.values;
      Real fd = (action(up, p, lambda) - action(um, p, lambda)) / (2 * eps);
      GraphFunction gr = grad_action(u, p, lambda);
      Real ip = (gr.values.cwiseProduct(v.values)).dot(m);
      add("gradient vs central difference " + id, std::abs(fd - ip),
          1e-6 * std::max(std::abs(fd), Real(1)));

      // homogeneity of the p-norm
      GraphFunction cu = u;
      cu.values *= 1.7;
      add("p-homogeneity " + id,
          std::abs(norm_lp_p(cu, p) - std::pow(1.7, p) * norm_lp_p(u, p)),
          1e-12 * std::pow(1.7, p) * std::max(norm_lp_p(u, p), Real(1)));
    }
  }

  // rearrangements are p-independent; run once per tester
  int samples = std::max(200, mesh->node_count());
  Real total = g.total_length();
  for (size_t t = 0; t < testers.size(); ++t) {
    const GraphFunction& u = testers[t];
    std::string id = "u" + std::to_string(t);
    RearrangedProfile r = monotone_rearrangement(u, samples);

    Real worst = 0;
    Real umax = max_abs(u);
    for (int k = 1; k < 20; ++k) {
      Real level = umax * k / 20;
      worst = std::max(worst, std::abs(measure_above(u, level) -
                                       profile_measure_above(r, level)));
    }
    add("equimeasurability " + id, worst, 8 * total / samples);
    add("rearrangement L2 " + id,
        std::abs(profile_l2_sq(r) - norm_l2_sq(u)),
        1e-3 * std::max(norm_l2_sq(u), Real(1e-12)));
    for (Real p : {4.0, 6.0})
      add("rearrangement L" + std::to_string(static_cast<int>(p)) + " " + id,
          std::abs(profile_lp_p(r, p) - norm_lp_p(u, p)),
          1e-3 * std::max(norm_lp_p(u, p), Real(1e-12)));

    PolyaSzegoResult mono = polya_szego_check(u, RearrangementKind::Monotone,
                                              samples);
    add("dirichlet non-increase (monotone) " + id, mono.lhs,
        mono.rhs + 1e-9 * (1 + mono.rhs));
    if (symmetric_rearrangement_eligible(g)) {
      PolyaSzegoResult sym =
          polya_szego_check(u, RearrangementKind::Symmetric, samples);
      add("dirichlet non-increase (symmetric) " + id, sym.lhs,
          sym.rhs + 1e-9 * (1 + sym.rhs));
    }
  }

  return rep;
}

}  // namespace graphnls
