#pragma once

#include <string>

#include "graphnls/metric_graph.hpp"

namespace graphnls {

/// JSON schema:
///   {"vertices": V,
///    "edges": [{"id": i, "from": a, "to": b, "length": L,
///               "kind": "bounded"|"halfline"}, ...],
///    "dirichlet": [v, ...]}   // optional
/// Half-line edges omit "to" (or set it to null); "length" is the
/// truncation. Violations are reported with JSON pointers.
MetricGraph graph_from_json(const std::string& text);
MetricGraph load_graph_json(const std::string& path);
std::string graph_to_json(const MetricGraph& g);
void save_graph_json(const MetricGraph& g, const std::string& path);

}  // namespace graphnls
