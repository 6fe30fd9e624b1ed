#include "graphnls/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace graphnls {

namespace {

// measure of {a + (b-a) s > t, s in (0,1)} * h for one linear piece
Real piece_above(Real a, Real b, Real h, Real t) {
  Real lo = std::min(a, b), hi = std::max(a, b);
  if (t < lo) return h;
  if (t >= hi) return 0;
  return h * (hi - t) / (hi - lo);
}

void check_nonnegative(const GraphFunction& u) {
  Real mx = max_abs(u);
  if (u.values.size() > 0 && u.values.minCoeff() < -1e-12 * std::max(mx, Real(1)))
    throw std::invalid_argument("rearrangement requires a nonnegative input");
}

// (measure, level) pairs with measure strictly increasing, level decreasing;
// this is the monotone rearrangement sampled at `samples` levels.
std::vector<std::pair<Real, Real>> distribution_points(const GraphFunction& u,
                                                       int samples) {
  if (samples < 2) throw std::invalid_argument("samples must be >= 2");
  check_nonnegative(u);
  Real umax = 0;
  for (Index i = 0; i < u.values.size(); ++i)
    umax = std::max(umax, u.values[i]);
  Real total = u.mesh->graph().total_length();

  std::vector<std::pair<Real, Real>> pts;
  pts.reserve(static_cast<size_t>(samples) + 2);
  Real prev_x = -1;
  for (int j = samples; j >= 0; --j) {
    Real t = umax * j / samples;
    Real m = measure_above(u, t);
    if (m > prev_x) {  // first (largest) level at each distinct measure
      pts.emplace_back(m, t);
      prev_x = m;
    }
  }
  if (prev_x < total) pts.emplace_back(total, 0.0);
  return pts;
}

Real integrate(const RearrangedProfile& r,
               const std::function<Real(Real, Real, Real)>& piece) {
  Real sum = 0;
  for (size_t i = 0; i + 1 < r.x.size(); ++i) {
    Real h = r.x[i + 1] - r.x[i];
    if (h > 0) sum += piece(r.value[i], r.value[i + 1], h);
  }
  return sum;
}

}  // namespace

Real measure_above(const GraphFunction& u, Real level) {
  Real m = 0;
  const auto& g = u.mesh->graph();
  for (int e = 0; e < static_cast<int>(g.edges().size()); ++e) {
    const EdgeMesh& em = u.mesh->edge_mesh(e);
    for (int i = 0; i + 1 < em.nodes; ++i)
      m += piece_above(u.value_at(e, i), u.value_at(e, i + 1), em.h, level);
  }
  return m;
}

RearrangedProfile monotone_rearrangement(const GraphFunction& u, int samples) {
  auto pts = distribution_points(u, samples);
  RearrangedProfile r;
  for (auto [x, t] : pts) {
    r.x.push_back(x);
    r.value.push_back(t);
  }
  return r;
}

RearrangedProfile symmetric_rearrangement(const GraphFunction& u,
                                          int samples) {
  auto pts = distribution_points(u, samples);
  RearrangedProfile r;
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    r.x.push_back(-it->first / 2);
    r.value.push_back(it->second);
  }
  for (auto [x, t] : pts) {
    if (x == 0) continue;  // center point already emitted
    r.x.push_back(x / 2);
    r.value.push_back(t);
  }
  return r;
}

Real profile_measure_above(const RearrangedProfile& r, Real level) {
  Real m = 0;
  for (size_t i = 0; i + 1 < r.x.size(); ++i) {
    Real h = r.x[i + 1] - r.x[i];
    if (h > 0) m += piece_above(r.value[i], r.value[i + 1], h, level);
  }
  return m;
}

Real profile_l2_sq(const RearrangedProfile& r) {
  return integrate(r, [](Real a, Real b, Real h) {
    return h / 3 * (a * a + a * b + b * b);
  });
}

Real profile_lp_p(const RearrangedProfile& r, Real p) {
  // exact on each linear piece: int |v|^p with v linear, v >= 0
  return integrate(r, [p](Real a, Real b, Real h) {
    if (std::abs(b - a) < 1e-14 * std::max(std::abs(a), Real(1)))
      return h * std::pow(std::abs(a), p);
    return h * (std::pow(b, p + 1) - std::pow(a, p + 1)) / ((p + 1) * (b - a));
  });
}

Real profile_dirichlet_sq(const RearrangedProfile& r) {
  return integrate(
      r, [](Real a, Real b, Real h) { return (b - a) * (b - a) / h; });
}

PolyaSzegoResult polya_szego_check(const GraphFunction& u,
                                   RearrangementKind kind, int samples) {
  if (samples <= 0) samples = std::max(64, u.mesh->node_count());
  RearrangedProfile r = (kind == RearrangementKind::Monotone)
                            ? monotone_rearrangement(u, samples)
                            : symmetric_rearrangement(u, samples);
  PolyaSzegoResult res;
  res.lhs = profile_dirichlet_sq(r);
  res.rhs = seminorm_h1_sq(u);
  res.holds = res.lhs <= res.rhs + 1e-9 * (1 + res.rhs);
  return res;
}

}  // namespace graphnls
