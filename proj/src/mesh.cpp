#include "graphnls/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>

namespace graphnls {

Mesh::Mesh(MetricGraph g, Real target_h)
    : graph_(std::move(g)), target_h_(target_h) {
  if (!(target_h > 0))
    throw std::invalid_argument("target_h must be positive");

  const auto& edges = graph_.edges();
  edge_mesh_.resize(edges.size());
  edge_first_interior_.resize(edges.size());

  int next = graph_.vertex_count();
  for (size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    int n = std::max<int>(2, static_cast<int>(std::ceil(e.length / target_h)) + 1);
    if (e.is_loop()) n = std::max(n, 3);
    edge_mesh_[k] = {n, e.length / (n - 1)};
    edge_first_interior_[k] = next;
    next += n - 2;
    if (e.is_half_line()) ++next;  // far-field node
  }
  node_count_ = next;

  // DOF map: every node except half-line far ends and Dirichlet vertices.
  node_dof_.assign(static_cast<size_t>(node_count_), -1);
  std::vector<bool> fixed(static_cast<size_t>(node_count_), false);
  for (VertexId v = 0; v < graph_.vertex_count(); ++v)
    if (graph_.is_dirichlet(v)) fixed[static_cast<size_t>(v)] = true;
  for (size_t k = 0; k < edges.size(); ++k)
    if (edges[k].is_half_line())
      fixed[static_cast<size_t>(node_of(static_cast<int>(k),
                                        edge_mesh_[k].nodes - 1))] = true;
  int dof = 0;
  for (int n = 0; n < node_count_; ++n)
    if (!fixed[static_cast<size_t>(n)]) node_dof_[static_cast<size_t>(n)] = dof++;
  dof_count_ = dof;

  lumped_mass_ = Vector::Zero(dof_count_);
  std::vector<Eigen::Triplet<Real>> trip;
  node_adj_.assign(static_cast<size_t>(node_count_), {});
  for (size_t k = 0; k < edges.size(); ++k) {
    const EdgeMesh& em = edge_mesh_[k];
    for (int i = 0; i + 1 < em.nodes; ++i) {
      int a = node_of(static_cast<int>(k), i);
      int b = node_of(static_cast<int>(k), i + 1);
      node_adj_[static_cast<size_t>(a)].emplace_back(b, em.h);
      node_adj_[static_cast<size_t>(b)].emplace_back(a, em.h);
      int da = node_dof_[static_cast<size_t>(a)];
      int db = node_dof_[static_cast<size_t>(b)];
      Real w = 1.0 / em.h;
      if (da >= 0) {
        lumped_mass_[da] += em.h / 2;
        trip.emplace_back(da, da, w);
      }
      if (db >= 0) {
        lumped_mass_[db] += em.h / 2;
        trip.emplace_back(db, db, w);
      }
      if (da >= 0 && db >= 0) {
        trip.emplace_back(da, db, -w);
        trip.emplace_back(db, da, -w);
      }
    }
  }
  stiffness_.resize(dof_count_, dof_count_);
  stiffness_.setFromTriplets(trip.begin(), trip.end());
}

int Mesh::node_of(int e, int i) const {
  const Edge& ed = graph_.edge(e);
  const EdgeMesh& em = edge_mesh_[static_cast<size_t>(e)];
  if (i == 0) return ed.from;
  if (i == em.nodes - 1) {
    if (ed.is_half_line())
      return edge_first_interior_[static_cast<size_t>(e)] + em.nodes - 2;
    return ed.to;
  }
  return edge_first_interior_[static_cast<size_t>(e)] + i - 1;
}

MeshPtr build_mesh(const MetricGraph& g, Real target_h) {
  return std::make_shared<Mesh>(g, target_h);
}

GraphFunction zero_function(MeshPtr mesh) {
  GraphFunction u;
  u.values = Vector::Zero(mesh->dof_count());
  u.mesh = std::move(mesh);
  return u;
}

GraphFunction sample(MeshPtr mesh, const std::function<Real(int, Real)>& f) {
  GraphFunction u = zero_function(mesh);
  const auto& g = mesh->graph();
  for (int e = 0; e < static_cast<int>(g.edges().size()); ++e) {
    const EdgeMesh& em = mesh->edge_mesh(e);
    for (int i = 0; i < em.nodes; ++i) {
      int d = mesh->dof_of(e, i);
      if (d >= 0) u.values[d] = f(e, i * em.h);
    }
  }
  return u;
}

GraphFunction resample(const GraphFunction& u, MeshPtr target) {
  const auto& src = u.mesh->graph().edges();
  const auto& dst = target->graph().edges();
  if (src.size() != dst.size())
    throw std::invalid_argument("resample: incompatible graphs");
  GraphFunction v = zero_function(target);
  for (int e = 0; e < static_cast<int>(dst.size()); ++e) {
    Real ratio = src[static_cast<size_t>(e)].length / dst[static_cast<size_t>(e)].length;
    const EdgeMesh& em_src = u.mesh->edge_mesh(e);
    const EdgeMesh& em_dst = target->edge_mesh(e);
    for (int i = 0; i < em_dst.nodes; ++i) {
      int d = target->dof_of(e, i);
      if (d < 0) continue;
      Real s = i * em_dst.h * ratio;  // arclength in the source edge
      Real t = s / em_src.h;
      int j = std::min(static_cast<int>(t), em_src.nodes - 2);
      Real w = t - j;
      v.values[d] = (1 - w) * u.value_at(e, j) + w * u.value_at(e, j + 1);
    }
  }
  return v;
}

namespace {

template <typename F>
Real accumulate_edges(const GraphFunction& u, F per_interval) {
  Real sum = 0;
  const auto& g = u.mesh->graph();
  for (int e = 0; e < static_cast<int>(g.edges().size()); ++e) {
    const EdgeMesh& em = u.mesh->edge_mesh(e);
    Real edge_sum = 0;
    for (int i = 0; i + 1 < em.nodes; ++i)
      edge_sum += per_interval(u.value_at(e, i), u.value_at(e, i + 1), em.h);
    sum += edge_sum;
  }
  return sum;
}

}  // namespace

Real norm_l2_sq(const GraphFunction& u) {
  return accumulate_edges(
      u, [](Real a, Real b, Real h) { return h / 2 * (a * a + b * b); });
}

Real norm_lp_p(const GraphFunction& u, Real p, Quadrature rule) {
  if (!(p > 2)) throw std::invalid_argument("norm_lp_p requires p > 2");
  if (rule == Quadrature::Simpson) {
    return accumulate_edges(u, [p](Real a, Real b, Real h) {
      Real mid = (a + b) / 2;
      return h / 6 *
             (std::pow(std::abs(a), p) + 4 * std::pow(std::abs(mid), p) +
              std::pow(std::abs(b), p));
    });
  }
  return accumulate_edges(u, [p](Real a, Real b, Real h) {
    return h / 2 * (std::pow(std::abs(a), p) + std::pow(std::abs(b), p));
  });
}

Real seminorm_h1_sq(const GraphFunction& u) {
  return accumulate_edges(
      u, [](Real a, Real b, Real h) { return (b - a) * (b - a) / h; });
}

Real max_abs(const GraphFunction& u) {
  return u.values.size() == 0 ? 0 : u.values.cwiseAbs().maxCoeff();
}

std::vector<Real> node_distances(const Mesh& mesh, int e0, int i0) {
  std::vector<Real> dist(static_cast<size_t>(mesh.node_count()),
                         std::numeric_limits<Real>::infinity());
  using Item = std::pair<Real, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  int start = mesh.node_of(e0, i0);
  dist[static_cast<size_t>(start)] = 0;
  heap.emplace(0.0, start);
  while (!heap.empty()) {
    auto [d, n] = heap.top();
    heap.pop();
    if (d > dist[static_cast<size_t>(n)]) continue;
    for (auto [m, h] : mesh.node_neighbors(n)) {
      Real nd = d + h;
      if (nd < dist[static_cast<size_t>(m)]) {
        dist[static_cast<size_t>(m)] = nd;
        heap.emplace(nd, m);
      }
    }
  }
  return dist;
}

NlseResidual nlse_residual(const GraphFunction& u, Real lambda, Real p) {
  NlseResidual r;
  const auto& g = u.mesh->graph();
  for (int e = 0; e < static_cast<int>(g.edges().size()); ++e) {
    const EdgeMesh& em = u.mesh->edge_mesh(e);
    for (int i = 1; i + 1 < em.nodes; ++i) {
      Real um = u.value_at(e, i - 1), uc = u.value_at(e, i),
           up = u.value_at(e, i + 1);
      Real second = (um - 2 * uc + up) / (em.h * em.h);
      Real res = second + std::pow(std::abs(uc), p - 2) * uc - lambda * uc;
      r.interior_inf = std::max(r.interior_inf, std::abs(res));
    }
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (g.is_dirichlet(v)) continue;
    Real flux = 0;
    for (auto [eid, end] : g.incident(v)) {
      const EdgeMesh& em = u.mesh->edge_mesh(eid);
      auto at = [&](int i) {
        return u.value_at(eid, end == 0 ? i : em.nodes - 1 - i);
      };
      if (em.nodes >= 3) {
        flux += (-3 * at(0) + 4 * at(1) - at(2)) / (2 * em.h);
      } else {
        flux += (at(1) - at(0)) / em.h;
      }
    }
    r.kirchhoff_inf = std::max(r.kirchhoff_inf, std::abs(flux));
  }
  return r;
}

void write_function_csv(const GraphFunction& u, std::ostream& out) {
  out << "edge_id,arclength,value\n";
  const auto& g = u.mesh->graph();
  char buf[64];
  for (int e = 0; e < static_cast<int>(g.edges().size()); ++e) {
    const EdgeMesh& em = u.mesh->edge_mesh(e);
    for (int i = 0; i < em.nodes; ++i) {
      std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g", e, i * em.h,
                    u.value_at(e, i));
      out << buf << '\n';
    }
  }
}

}  // namespace graphnls
