#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "graphnls/baselines.hpp"
#include "graphnls/functionals.hpp"
#include "graphnls/mesh.hpp"

using namespace graphnls;

TEST_CASE("node counts follow ceil(length/h) + 1") {
  MeshPtr m1 = build_mesh(build_named("segment", {1.0}), 0.25);
  CHECK(m1->edge_mesh(0).nodes == 5);
  CHECK(m1->edge_mesh(0).h == doctest::Approx(0.25));

  MeshPtr m2 = build_mesh(build_named("segment", {1.0}), 0.3);
  CHECK(m2->edge_mesh(0).nodes == 5);  // ceil(1/0.3) = 4 intervals
  CHECK(m2->edge_mesh(0).h == doctest::Approx(0.25));

  MeshPtr m3 = build_mesh(build_named("circle", {2 * M_PI}), 0.1);
  CHECK(m3->edge_mesh(0).nodes == 64);  // 63 intervals, shared endpoint
  CHECK(m3->dof_count() == 63);
  CHECK(m3->edge_mesh(0).h <= 0.1);
}

TEST_CASE("spacing times interval count equals the edge length") {
  for (const char* name : {"segment", "tadpole", "ladder(3)", "fork2"}) {
    MetricGraph g = build_named(name);
    MeshPtr m = build_mesh(g, 0.37);
    for (int e = 0; e < static_cast<int>(g.edges().size()); ++e) {
      const EdgeMesh& em = m->edge_mesh(e);
      CHECK(em.h * (em.nodes - 1) ==
            doctest::Approx(g.edge(e).length).epsilon(1e-12));
    }
  }
}

TEST_CASE("constant function: exact norms, zero seminorm") {
  MeshPtr m = build_mesh(build_named("segment", {3.0}), 0.1);
  GraphFunction u = zero_function(m);
  u.values.setConstant(2.0);
  CHECK(norm_l2_sq(u) == doctest::Approx(4.0 * 3.0).epsilon(1e-13));
  CHECK(norm_lp_p(u, 4.0) == doctest::Approx(16.0 * 3.0).epsilon(1e-13));
  CHECK(seminorm_h1_sq(u) == doctest::Approx(0.0));
}

TEST_CASE("unit slope on the unit segment has unit H1 seminorm") {
  MeshPtr m = build_mesh(build_named("segment", {1.0}), 0.01);
  GraphFunction u = sample(m, [](int, Real s) { return s; });
  CHECK(seminorm_h1_sq(u) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sampled soliton mass matches mu_R at quadrature accuracy") {
  // +-40 window at h = 1e-3; trapezoid on a decaying analytic function
  MetricGraph line = build_named("line", {}, 40.0);
  MeshPtr m = build_mesh(line, 1e-3);
  GraphFunction u = sample(m, [](int, Real s) { return phi1(s); });
  CHECK(std::abs(norm_l2_sq(u) - mu_line()) < 1e-6);
}

TEST_CASE("mesh refinement convergence is second order") {
  MetricGraph line = build_named("line", {}, 30.0);
  Real err_h = 0, err_h2 = 0;
  {
    MeshPtr m = build_mesh(line, 0.2);
    GraphFunction u = sample(m, [](int, Real s) { return phi1(s); });
    err_h = std::abs(norm_l2_sq(u) - mu_line());
  }
  {
    MeshPtr m = build_mesh(line, 0.1);
    GraphFunction u = sample(m, [](int, Real s) { return phi1(s); });
    err_h2 = std::abs(norm_l2_sq(u) - mu_line());
  }
  CHECK(err_h2 < err_h / 3.0);  // ~4x for order h^2
}

TEST_CASE("degree-2 vertex transparency") {
  // split segment(1) into 0.4 + 0.6 at a shared node; same h pattern
  MetricGraph whole = build_named("segment", {1.0});
  std::vector<Edge> split_edges = {{-1, 0, 2, 0.4, EdgeKind::Bounded},
                                   {-1, 2, 1, 0.6, EdgeKind::Bounded}};
  MetricGraph split(3, split_edges);
  MeshPtr mw = build_mesh(whole, 0.1);
  MeshPtr ms = build_mesh(split, 0.1);
  auto fw = sample(mw, [](int, Real s) { return std::sin(3 * s) + 2; });
  auto fs = sample(ms, [](int e, Real s) {
    Real x = (e == 0) ? s : 0.4 + s;
    return std::sin(3 * x) + 2;
  });
  CHECK(norm_l2_sq(fw) == doctest::Approx(norm_l2_sq(fs)).epsilon(1e-12));
  CHECK(norm_lp_p(fw, 4) == doctest::Approx(norm_lp_p(fs, 4)).epsilon(1e-12));
  CHECK(seminorm_h1_sq(fw) ==
        doctest::Approx(seminorm_h1_sq(fs)).epsilon(1e-12));
}

TEST_CASE("half-line far node is fixed to zero and carries no DOF") {
  MetricGraph g = build_named("halfline", {}, 10.0);
  MeshPtr m = build_mesh(g, 0.5);
  const EdgeMesh& em = m->edge_mesh(0);
  CHECK(m->dof_of(0, em.nodes - 1) == -1);
  CHECK(m->dof_count() == em.nodes - 1);
  GraphFunction u = zero_function(m);
  u.values.setConstant(1.0);
  CHECK(u.value_at(0, em.nodes - 1) == 0.0);
  // the last interval still contributes to the seminorm
  CHECK(seminorm_h1_sq(u) == doctest::Approx(1.0 / em.h));
}

TEST_CASE("dirichlet vertices are excluded from the DOF set") {
  MetricGraph g = build_named("ladder(3)");
  MeshPtr m = build_mesh(g, 0.5);
  for (VertexId v : g.dirichlet_vertices()) CHECK(m->vertex_dof(v) == -1);
  int expect = m->node_count() - 4;
  CHECK(m->dof_count() == expect);
}

TEST_CASE("nlse residual vanishes for constants with lambda = kappa^{p-2}") {
  MetricGraph g = build_named("star(3)", {1.0, 1.5, 0.5});
  MeshPtr m = build_mesh(g, 0.05);
  GraphFunction u = zero_function(m);
  Real kappa = 0.8, p = 4.0;
  u.values.setConstant(kappa);
  NlseResidual r = nlse_residual(u, std::pow(kappa, p - 2), p);
  CHECK(r.interior_inf < 1e-12);
  CHECK(r.kirchhoff_inf < 1e-12);
}

TEST_CASE("nlse residual of the sampled soliton is small at h = 1e-3") {
  MetricGraph line = build_named("line", {}, 40.0);
  MeshPtr m = build_mesh(line, 1e-3);
  GraphFunction u = sample(m, [](int, Real s) { return phi1(s); });
  NlseResidual r = nlse_residual(u, 1.0, 6.0);
  CHECK(r.interior_inf < 1e-2);
  CHECK(r.kirchhoff_inf < 1e-2);
}

TEST_CASE("a profile violating flux balance is detected") {
  MetricGraph g = build_named("star(3)");
  MeshPtr m = build_mesh(g, 0.05);
  // decreasing along every arm: all outgoing derivatives negative at center
  GraphFunction u = sample(m, [](int, Real s) { return 1.0 - s; });
  NlseResidual r = nlse_residual(u, 1.0, 4.0);
  CHECK(r.kirchhoff_inf > 0.1);
}

TEST_CASE("norm_lp_p rejects p <= 2") {
  MeshPtr m = build_mesh(build_named("segment"), 0.25);
  GraphFunction u = zero_function(m);
  CHECK_THROWS_AS(norm_lp_p(u, 2.0), std::invalid_argument);
}

TEST_CASE("simpson option agrees with trapezoid at refinement") {
  MeshPtr m = build_mesh(build_named("segment", {1.0}), 1e-3);
  GraphFunction u = sample(m, [](int, Real s) { return 1 + std::sin(5 * s); });
  Real trap = norm_lp_p(u, 4.0, Quadrature::Trapezoid);
  Real simp = norm_lp_p(u, 4.0, Quadrature::Simpson);
  CHECK(trap == doctest::Approx(simp).epsilon(1e-5));
}

TEST_CASE("resample reproduces linear functions exactly") {
  MetricGraph g = build_named("segment", {2.0});
  GraphFunction u = sample(build_mesh(g, 0.31), [](int, Real s) { return 3 * s - 1; });
  GraphFunction v = resample(u, build_mesh(g, 0.11));
  GraphFunction w = sample(build_mesh(g, 0.11), [](int, Real s) { return 3 * s - 1; });
  CHECK((v.values - w.values).cwiseAbs().maxCoeff() < 1e-12);
}
