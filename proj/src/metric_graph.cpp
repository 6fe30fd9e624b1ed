#include "graphnls/metric_graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace graphnls {

MetricGraph::MetricGraph(int vertex_count, std::vector<Edge> edges,
                         std::vector<VertexId> dirichlet)
    : vertex_count_(vertex_count),
      edges_(std::move(edges)),
      dirichlet_(std::move(dirichlet)) {
  if (vertex_count_ < 1)
    throw std::invalid_argument("graph must have at least one vertex");
  if (edges_.empty())
    throw std::invalid_argument("graph must have at least one edge");

  for (size_t k = 0; k < edges_.size(); ++k) {
    Edge& e = edges_[k];
    e.id = static_cast<int>(k);
    if (!(e.length > 0))
      throw std::invalid_argument("edge " + std::to_string(k) +
                                  ": length must be positive");
    if (e.from < 0 || e.from >= vertex_count_)
      throw std::invalid_argument("edge " + std::to_string(k) +
                                  ": endpoint out of range");
    if (e.is_half_line()) {
      e.to = -1;
    } else if (e.to < 0 || e.to >= vertex_count_) {
      throw std::invalid_argument("edge " + std::to_string(k) +
                                  ": endpoint out of range");
    }
  }

  adjacency_.assign(static_cast<size_t>(vertex_count_), {});
  for (const Edge& e : edges_) {
    adjacency_[static_cast<size_t>(e.from)].emplace_back(e.id, 0);
    if (!e.is_half_line())
      adjacency_[static_cast<size_t>(e.to)].emplace_back(e.id, 1);
  }

  dirichlet_mask_.assign(static_cast<size_t>(vertex_count_), false);
  for (VertexId v : dirichlet_) {
    if (v < 0 || v >= vertex_count_)
      throw std::invalid_argument("dirichlet vertex out of range");
    dirichlet_mask_[static_cast<size_t>(v)] = true;
  }

  // connectivity over the vertex set
  std::vector<bool> seen(static_cast<size_t>(vertex_count_), false);
  std::queue<VertexId> fifo;
  fifo.push(0);
  seen[0] = true;
  int reached = 1;
  while (!fifo.empty()) {
    VertexId v = fifo.front();
    fifo.pop();
    for (auto [eid, end] : adjacency_[static_cast<size_t>(v)]) {
      const Edge& e = edges_[static_cast<size_t>(eid)];
      if (e.is_half_line()) continue;
      VertexId w = (end == 0) ? e.to : e.from;
      if (!seen[static_cast<size_t>(w)]) {
        seen[static_cast<size_t>(w)] = true;
        ++reached;
        fifo.push(w);
      }
    }
  }
  if (reached != vertex_count_)
    throw std::invalid_argument("graph is not connected");
}

Real MetricGraph::total_length() const {
  Real sum = 0;
  for (const Edge& e : edges_) sum += e.length;
  return sum;
}

bool has_pendant(const MetricGraph& g) {
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (g.is_dirichlet(v)) continue;
    if (g.degree(v) != 1) continue;
    const auto& [eid, end] = g.incident(v)[0];
    if (!g.edge(eid).is_half_line()) return true;
  }
  return false;
}

bool is_compact(const MetricGraph& g) {
  for (const Edge& e : g.edges())
    if (e.is_half_line()) return false;
  return true;
}

MetricGraph scale(const MetricGraph& g, Real factor) {
  if (!(factor > 0)) throw std::invalid_argument("scale factor must be > 0");
  std::vector<Edge> edges = g.edges();
  for (Edge& e : edges) e.length *= factor;
  MetricGraph scaled(g.vertex_count(), std::move(edges),
                     g.dirichlet_vertices());
  scaled.name = g.name;
  return scaled;
}

namespace {

Real pick(const std::vector<Real>& lengths, size_t i, Real fallback) {
  if (i < lengths.size()) {
    if (!(lengths[i] > 0))
      throw std::invalid_argument("edge lengths must be positive");
    return lengths[i];
  }
  return fallback;
}

// "star(5)" -> {"star", 5}; "circle" -> {"circle", -1}
std::pair<std::string, int> split_name(const std::string& name) {
  auto open = name.find('(');
  if (open == std::string::npos) return {name, -1};
  auto close = name.find(')', open);
  if (close == std::string::npos || close != name.size() - 1)
    throw std::invalid_argument("malformed graph name: " + name);
  int arg = 0;
  try {
    arg = std::stoi(name.substr(open + 1, close - open - 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed graph name: " + name);
  }
  return {name.substr(0, open), arg};
}

}  // namespace

MetricGraph build_named(const std::string& name,
                        const std::vector<Real>& lengths, Real truncation) {
  if (!(truncation > 0))
    throw std::invalid_argument("truncation must be positive");
  auto [base, arg] = split_name(name);

  auto half = [&](VertexId at, Real trunc) {
    return Edge{-1, at, -1, trunc, EdgeKind::HalfLine};
  };
  auto bounded = [](VertexId a, VertexId b, Real len) {
    return Edge{-1, a, b, len, EdgeKind::Bounded};
  };

  MetricGraph g = [&]() -> MetricGraph {
    if (base == "segment") {
      return MetricGraph(2, {bounded(0, 1, pick(lengths, 0, 1.0))});
    }
    if (base == "circle") {
      return MetricGraph(1, {bounded(0, 0, pick(lengths, 0, 2.0))});
    }
    if (base == "star") {
      int k = (arg < 0) ? 3 : arg;
      if (k < 2) throw std::invalid_argument("star(k) requires k >= 2");
      std::vector<Edge> es;
      for (int i = 0; i < k; ++i)
        es.push_back(bounded(0, i + 1, pick(lengths, static_cast<size_t>(i), 1.0)));
      return MetricGraph(k + 1, std::move(es));
    }
    if (base == "tadpole") {
      // loop + one half-line at the same vertex
      return MetricGraph(1, {bounded(0, 0, pick(lengths, 0, 2 * M_PI)),
                             half(0, truncation)});
    }
    if (base == "tgraph") {
      // pendant edge at vertex 1, two half-lines at the junction vertex 0
      return MetricGraph(2, {bounded(0, 1, pick(lengths, 0, 1.0)),
                             half(0, truncation), half(0, truncation)});
    }
    if (base == "signpost") {
      // loop at vertex 0, stem 0-1, two half-lines at vertex 1
      return MetricGraph(2, {bounded(0, 0, pick(lengths, 0, 2.0)),
                             bounded(0, 1, pick(lengths, 1, 1.0)),
                             half(1, truncation), half(1, truncation)});
    }
    if (base == "fork2" || base == "fork3") {
      int teeth = (base == "fork2") ? 2 : 3;
      std::vector<Edge> es;
      es.push_back(half(0, truncation));
      for (int i = 0; i < teeth; ++i)
        es.push_back(bounded(0, i + 1, pick(lengths, static_cast<size_t>(i), 1.0)));
      return MetricGraph(teeth + 1, std::move(es));
    }
    if (base == "ladder") {
      // N-cell truncation of the Z-periodic ladder with unit edges:
      // rungs at columns 0..N, rails between consecutive columns on both
      // rows. Vertex (k, row) has id 2k + row. The four corner vertices are
      // Dirichlet truncation nodes; the window is widened until results are
      // truncation-insensitive.
      int n = (arg < 0) ? 10 : arg;
      if (n < 1) throw std::invalid_argument("ladder(N) requires N >= 1");
      std::vector<Edge> es;
      for (int k = 0; k <= n; ++k) es.push_back(bounded(2 * k, 2 * k + 1, 1.0));
      for (int k = 0; k < n; ++k) {
        es.push_back(bounded(2 * k, 2 * (k + 1), 1.0));
        es.push_back(bounded(2 * k + 1, 2 * (k + 1) + 1, 1.0));
      }
      std::vector<VertexId> corners = {0, 1, 2 * n, 2 * n + 1};
      return MetricGraph(2 * (n + 1), std::move(es), std::move(corners));
    }
    if (base == "line") {
      return MetricGraph(1, {half(0, truncation), half(0, truncation)});
    }
    if (base == "halfline") {
      return MetricGraph(1, {half(0, truncation)});
    }
    throw std::invalid_argument("unknown graph name: " + name);
  }();

  g.name = name;
  return g;
}

}  // namespace graphnls
