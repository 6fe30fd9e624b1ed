#include "graphnls/graph_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace graphnls {

using nlohmann::json;

MetricGraph graph_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("graph JSON: ") + e.what());
  }

  std::vector<std::string> errs;
  auto fail = [&](const std::string& ptr, const std::string& msg) {
    errs.push_back(ptr + ": " + msg);
  };

  int vertices = 0;
  if (!j.contains("vertices") || !j["vertices"].is_number_integer())
    fail("/vertices", "required integer");
  else
    vertices = j["vertices"].get<int>();

  std::vector<Edge> edges;
  if (!j.contains("edges") || !j["edges"].is_array() || j["edges"].empty()) {
    fail("/edges", "required non-empty array");
  } else {
    for (size_t k = 0; k < j["edges"].size(); ++k) {
      const json& je = j["edges"][k];
      std::string ptr = "/edges/" + std::to_string(k);
      Edge e;
      if (!je.is_object()) {
        fail(ptr, "must be an object");
        continue;
      }
      std::string kind = je.value("kind", "bounded");
      if (kind == "bounded")
        e.kind = EdgeKind::Bounded;
      else if (kind == "halfline")
        e.kind = EdgeKind::HalfLine;
      else
        fail(ptr + "/kind", "must be \"bounded\" or \"halfline\"");
      if (!je.contains("from") || !je["from"].is_number_integer())
        fail(ptr + "/from", "required integer");
      else
        e.from = je["from"].get<int>();
      if (e.kind == EdgeKind::Bounded) {
        if (!je.contains("to") || !je["to"].is_number_integer())
          fail(ptr + "/to", "required integer for bounded edges");
        else
          e.to = je["to"].get<int>();
      }
      if (!je.contains("length") || !je["length"].is_number())
        fail(ptr + "/length", "required number");
      else
        e.length = je["length"].get<Real>();
      if (!(e.length > 0)) fail(ptr + "/length", "must be > 0");
      if (e.from < 0 || e.from >= vertices)
        fail(ptr + "/from", "vertex out of range");
      if (e.kind == EdgeKind::Bounded && (e.to < 0 || e.to >= vertices))
        fail(ptr + "/to", "vertex out of range");
      edges.push_back(e);
    }
  }

  std::vector<VertexId> dirichlet;
  if (j.contains("dirichlet")) {
    if (!j["dirichlet"].is_array()) {
      fail("/dirichlet", "must be an array of vertex ids");
    } else {
      for (size_t k = 0; k < j["dirichlet"].size(); ++k) {
        const json& jd = j["dirichlet"][k];
        if (!jd.is_number_integer() || jd.get<int>() < 0 ||
            jd.get<int>() >= vertices)
          fail("/dirichlet/" + std::to_string(k), "vertex out of range");
        else
          dirichlet.push_back(jd.get<int>());
      }
    }
  }

  if (!errs.empty()) {
    std::ostringstream msg;
    msg << "graph JSON schema violations:";
    for (const auto& e : errs) msg << "\n  " << e;
    throw std::invalid_argument(msg.str());
  }

  MetricGraph g(vertices, std::move(edges), std::move(dirichlet));
  g.name = j.value("name", "");
  return g;
}

MetricGraph load_graph_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open graph file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return graph_from_json(ss.str());
}

std::string graph_to_json(const MetricGraph& g) {
  json j;
  if (!g.name.empty()) j["name"] = g.name;
  j["vertices"] = g.vertex_count();
  j["edges"] = json::array();
  for (const Edge& e : g.edges()) {
    json je;
    je["id"] = e.id;
    je["from"] = e.from;
    if (!e.is_half_line()) je["to"] = e.to;
    je["length"] = e.length;
    je["kind"] = e.is_half_line() ? "halfline" : "bounded";
    j["edges"].push_back(je);
  }
  if (!g.dirichlet_vertices().empty()) j["dirichlet"] = g.dirichlet_vertices();
  return j.dump(2);
}

void save_graph_json(const MetricGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << graph_to_json(g) << '\n';
}

}  // namespace graphnls
