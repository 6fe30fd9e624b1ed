#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "graphnls/metric_graph.hpp"

using namespace graphnls;

namespace {

int loop_count(const MetricGraph& g) {
  int n = 0;
  for (const Edge& e : g.edges()) n += e.is_loop();
  return n;
}

int half_line_count(const MetricGraph& g) {
  int n = 0;
  for (const Edge& e : g.edges()) n += e.is_half_line();
  return n;
}

int degree_sum(const MetricGraph& g) {
  int n = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) n += g.degree(v);
  return n;
}

}  // namespace

TEST_CASE("segment builder") {
  MetricGraph g = build_named("segment", {1.0});
  CHECK(g.vertex_count() == 2);
  CHECK(g.edges().size() == 1);
  CHECK(g.degree(0) == 1);
  CHECK(g.degree(1) == 1);
  CHECK(g.edge(0).kind == EdgeKind::Bounded);
  CHECK(has_pendant(g));
  CHECK(is_compact(g));
}

TEST_CASE("tadpole: one vertex of degree 3, loop counts twice") {
  MetricGraph g = build_named("tadpole", {2 * M_PI}, 40.0);
  CHECK(g.vertex_count() == 1);
  CHECK(g.edges().size() == 2);
  CHECK(g.degree(0) == 3);
  CHECK(loop_count(g) == 1);
  CHECK(half_line_count(g) == 1);
  CHECK_FALSE(is_compact(g));
  CHECK_FALSE(has_pendant(g));
}

TEST_CASE("tgraph: pendant vertex degree 1, junction degree 3") {
  MetricGraph g = build_named("tgraph", {1.0}, 40.0);
  CHECK(g.vertex_count() == 2);
  CHECK(g.degree(0) == 3);
  CHECK(g.degree(1) == 1);
  CHECK(has_pendant(g));
  CHECK_FALSE(is_compact(g));
}

TEST_CASE("circle has no pendant and is compact") {
  MetricGraph g = build_named("circle", {2.0});
  CHECK(g.vertex_count() == 1);
  CHECK(g.degree(0) == 2);
  CHECK_FALSE(has_pendant(g));
  CHECK(is_compact(g));
}

TEST_CASE("ladder truncation is compact, connected, pendant-free") {
  MetricGraph g = build_named("ladder(10)");
  CHECK(is_compact(g));
  CHECK(g.vertex_count() == 22);
  CHECK(g.edges().size() == 3 * 10 + 1);  // 11 rungs + 20 rails
  CHECK_FALSE(has_pendant(g));
  CHECK(g.dirichlet_vertices().size() == 4);
  for (const Edge& e : g.edges()) CHECK(e.length == 1.0);
}

TEST_CASE("pendant classification across the named graphs") {
  for (const char* name : {"segment", "tgraph", "fork2", "fork3", "star(3)"})
    CHECK_MESSAGE(has_pendant(build_named(name)), name);
  for (const char* name : {"circle", "tadpole", "signpost", "ladder(4)", "line"})
    CHECK_MESSAGE(!has_pendant(build_named(name)), name);
  // a lone half-line end is not a pendant
  CHECK_FALSE(has_pendant(build_named("halfline")));
}

TEST_CASE("degree sums: 2 * bounded non-loops + 2 * loops + half-lines") {
  for (const char* name : {"segment", "circle", "star(4)", "tadpole", "tgraph",
                           "signpost", "fork2", "fork3", "ladder(3)", "line",
                           "halfline"}) {
    MetricGraph g = build_named(name);
    int loops = loop_count(g);
    int halves = half_line_count(g);
    int bounded = static_cast<int>(g.edges().size()) - loops - halves;
    CHECK_MESSAGE(degree_sum(g) == 2 * bounded + 2 * loops + halves, name);
  }
}

TEST_CASE("scale multiplies lengths and truncations") {
  MetricGraph g = build_named("tadpole", {2 * M_PI}, 40.0);
  MetricGraph s = scale(g, 2.0);
  CHECK(s.edge(0).length == doctest::Approx(4 * M_PI).epsilon(1e-14));
  CHECK(s.edge(1).length == doctest::Approx(80.0).epsilon(1e-14));
  CHECK(s.vertex_count() == g.vertex_count());

  MetricGraph id = scale(g, 1.0);
  CHECK(id.edge(0).length == g.edge(0).length);
}

TEST_CASE("scale composes multiplicatively") {
  MetricGraph g = build_named("fork2", {0.3, 0.7}, 10.0);
  MetricGraph ab = scale(scale(g, 1.7), 2.3);
  MetricGraph once = scale(g, 1.7 * 2.3);
  for (size_t e = 0; e < g.edges().size(); ++e)
    CHECK(ab.edge(static_cast<int>(e)).length ==
          doctest::Approx(once.edge(static_cast<int>(e)).length)
              .epsilon(1e-12));
}

TEST_CASE("builders reject bad input") {
  CHECK_THROWS_AS(build_named("nonsense"), std::invalid_argument);
  CHECK_THROWS_AS(build_named("segment", {-1.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_named("ladder(0)"), std::invalid_argument);
  CHECK_THROWS_AS(scale(build_named("segment"), 0.0), std::invalid_argument);
}

TEST_CASE("disconnected graphs are rejected") {
  std::vector<Edge> edges = {{-1, 0, 1, 1.0, EdgeKind::Bounded},
                             {-1, 2, 3, 1.0, EdgeKind::Bounded}};
  CHECK_THROWS_AS(MetricGraph(4, edges), std::invalid_argument);
}

TEST_CASE("all builders produce connected graphs") {
  for (const char* name : {"segment", "circle", "star(5)", "tadpole", "tgraph",
                           "signpost", "fork2", "fork3", "ladder(7)", "line",
                           "halfline"}) {
    // the constructor itself runs the connectivity check
    CHECK_NOTHROW(build_named(name));
  }
}
