#pragma once

#include <Eigen/SparseCore>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "graphnls/metric_graph.hpp"

namespace graphnls {

enum class Quadrature { Trapezoid, Simpson };

struct EdgeMesh {
  int nodes = 0;  // local node count, >= 2 (>= 3 for loops)
  Real h = 0;     // spacing; h * (nodes - 1) == edge length
};

/// Per-edge uniform P1 mesh with shared vertex unknowns. Half-line far
/// endpoints and Dirichlet vertices are mesh nodes but not DOFs (value 0).
/// Holds the assembled stiffness matrix and the lumped (trapezoid) mass.
class Mesh {
 public:
  Mesh(MetricGraph g, Real target_h);

  const MetricGraph& graph() const { return graph_; }
  Real target_h() const { return target_h_; }

  const EdgeMesh& edge_mesh(int e) const {
    return edge_mesh_[static_cast<size_t>(e)];
  }
  int node_count() const { return node_count_; }
  int dof_count() const { return dof_count_; }

  /// Global node id of local node i on edge e (vertex nodes shared).
  int node_of(int e, int i) const;
  /// DOF of a global node, or -1 if the node is fixed to zero.
  int dof_of_node(int n) const { return node_dof_[static_cast<size_t>(n)]; }
  int dof_of(int e, int i) const { return dof_of_node(node_of(e, i)); }
  int vertex_dof(VertexId v) const { return node_dof_[static_cast<size_t>(v)]; }

  const Vector& lumped_mass() const { return lumped_mass_; }
  const Eigen::SparseMatrix<Real>& stiffness() const { return stiffness_; }

  /// (neighbor node, interval length) pairs, for graph-distance queries.
  const std::vector<std::pair<int, Real>>& node_neighbors(int n) const {
    return node_adj_[static_cast<size_t>(n)];
  }

 private:
  MetricGraph graph_;
  Real target_h_ = 0;
  std::vector<EdgeMesh> edge_mesh_;
  std::vector<int> edge_first_interior_;  // node id of first interior node
  int node_count_ = 0;
  int dof_count_ = 0;
  std::vector<int> node_dof_;
  Vector lumped_mass_;
  Eigen::SparseMatrix<Real> stiffness_;
  std::vector<std::vector<std::pair<int, Real>>> node_adj_;
};

using MeshPtr = std::shared_ptr<const Mesh>;

/// Per-edge node count = max(2, ceil(length/target_h) + 1), so the actual
/// spacing never exceeds target_h. Loops get at least 3 nodes.
MeshPtr build_mesh(const MetricGraph& g, Real target_h);

/// Continuous piecewise-linear scalar field on a meshed graph; one value per
/// DOF, fixed nodes read as 0.
struct GraphFunction {
  MeshPtr mesh;
  Vector values;

  Real value_at(int edge, int local_node) const {
    int d = mesh->dof_of(edge, local_node);
    return d < 0 ? Real(0) : values[d];
  }
};

GraphFunction zero_function(MeshPtr mesh);

/// Sample f(edge id, arclength within edge) at every node.
GraphFunction sample(MeshPtr mesh,
                     const std::function<Real(int, Real)>& f);

/// Linear interpolation onto another mesh of a graph with identical edges.
GraphFunction resample(const GraphFunction& u, MeshPtr target);

Real norm_l2_sq(const GraphFunction& u);
Real norm_lp_p(const GraphFunction& u, Real p,
               Quadrature rule = Quadrature::Trapezoid);
Real seminorm_h1_sq(const GraphFunction& u);

Real max_abs(const GraphFunction& u);

/// Graph distance from local node `i0` of edge `e0` to every node.
std::vector<Real> node_distances(const Mesh& mesh, int e0, int i0);

struct NlseResidual {
  Real interior_inf = 0;   // sup |u'' + |u|^{p-2} u - lambda u| at interior nodes
  Real kirchhoff_inf = 0;  // sup over vertices of |sum of outgoing derivatives|
};

/// Strong-form residual of u'' + |u|^{p-2}u = lambda u with Kirchhoff flux
/// balance, from centered/one-sided finite differences of the nodal values.
NlseResidual nlse_residual(const GraphFunction& u, Real lambda, Real p);

/// CSV rows (edge_id, arclength, value), fixed nodes included as 0.
void write_function_csv(const GraphFunction& u, std::ostream& out);

}  // namespace graphnls
