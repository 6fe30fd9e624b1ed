#pragma once

#include <string>
#include <utility>
#include <vector>

#include "graphnls/types.hpp"

namespace graphnls {

using VertexId = int;

enum class EdgeKind { Bounded, HalfLine };

/// One edge of a metric graph. Loops are a single Bounded edge with
/// from == to. A HalfLine attaches to the graph only at `from`; its far
/// endpoint is a synthetic far-field node that carries a homogeneous
/// Dirichlet value in any discretization, and `length` is the truncation.
struct Edge {
  int id = -1;
  VertexId from = -1;
  VertexId to = -1;  // ignored (set to -1) for half-lines
  Real length = 0;
  EdgeKind kind = EdgeKind::Bounded;

  bool is_loop() const { return kind == EdgeKind::Bounded && from == to; }
  bool is_half_line() const { return kind == EdgeKind::HalfLine; }
};

/// Connected metric graph: a finite set of vertices joined by intervals.
/// Immutable after construction; safe to share across threads.
///
/// Vertices listed in `dirichlet` are truncation artifacts (e.g. the outer
/// rail endpoints of a truncated ladder): they carry value 0 in any
/// discretization, are excluded from Kirchhoff checks, and never count as
/// pendants.
class MetricGraph {
 public:
  MetricGraph(int vertex_count, std::vector<Edge> edges,
              std::vector<VertexId> dirichlet = {});

  int vertex_count() const { return vertex_count_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[static_cast<size_t>(e)]; }

  /// Incident (edge id, endpoint index) pairs; loops appear twice.
  const std::vector<std::pair<int, int>>& incident(VertexId v) const {
    return adjacency_[static_cast<size_t>(v)];
  }
  int degree(VertexId v) const {
    return static_cast<int>(adjacency_[static_cast<size_t>(v)].size());
  }

  bool is_dirichlet(VertexId v) const {
    return dirichlet_mask_[static_cast<size_t>(v)];
  }
  const std::vector<VertexId>& dirichlet_vertices() const { return dirichlet_; }

  Real total_length() const;

  std::string name;  // builder provenance; empty for custom graphs

 private:
  int vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<int, int>>> adjacency_;
  std::vector<VertexId> dirichlet_;
  std::vector<bool> dirichlet_mask_;
};

/// Build one of the named graphs. Recognized names:
///   segment, circle, star(k), tadpole, tgraph, signpost, fork2, fork3,
///   ladder(N), line, halfline
/// `lengths` overrides the default edge lengths (builder-specific order);
/// `truncation` is the half-line truncation length.
MetricGraph build_named(const std::string& name,
                        const std::vector<Real>& lengths = {},
                        Real truncation = 40.0);

/// True iff some vertex has degree 1 and its incident edge is bounded.
/// Half-line far ends and Dirichlet truncation vertices do not count.
bool has_pendant(const MetricGraph& g);

/// True iff no edge is a half-line.
bool is_compact(const MetricGraph& g);

/// All edge lengths (and truncations) multiplied by `factor`; same topology.
MetricGraph scale(const MetricGraph& g, Real factor);

}  // namespace graphnls
