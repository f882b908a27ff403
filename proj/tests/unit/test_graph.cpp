// Copyright 2026 The vbqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "vbqc/graph.hpp"
#include "vbqc/rng.hpp"

namespace vbqc {
namespace test_graph {

static OpenGraph grover_graph() {
  return OpenGraph(
      {1, 2, 3, 4, 5, 6, 7, 8},
      {{1, 2}, {2, 3}, {1, 4}, {3, 6}, {4, 5}, {6, 7}, {5, 8}, {7, 8}}, {1, 2},
      {7, 8}, {1, 2, 3, 4, 5, 6});
}

static const Flow kGroverFlow{{1, 4}, {4, 5}, {5, 8}, {2, 3}, {3, 6}, {6, 7}};

// a - b - c with a = 1, b = 2, c = 3
static OpenGraph path3() { return OpenGraph({1, 2, 3}, {{1, 2}, {2, 3}}, {1}, {3}, {1, 2}); }

SCENARIO("Open graph construction checks its invariants", "[graph]") {
  GIVEN("A well-formed graph") {
    OpenGraph g = grover_graph();
    REQUIRE(g.size() == 8);
    REQUIRE(g.edges().size() == 8);
    REQUIRE(g.is_input(1));
    REQUIRE(g.is_output(8));
    REQUIRE_FALSE(g.is_output(6));
    REQUIRE(g.position(7) == 6);
    REQUIRE(g.position(8) == 6);
    REQUIRE(g.precedes(6, 7));
    REQUIRE_FALSE(g.precedes(7, 8));
  }
  GIVEN("Malformed graphs") {
    CHECK_THROWS_AS(
        OpenGraph({1, 2, 3}, {{1, 2}}, {}, {3}, {1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(
        OpenGraph({1, 2}, {{1, 1}, {1, 2}}, {}, {2}, {1}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        OpenGraph({1, 2}, {{1, 2}, {2, 1}}, {}, {2}, {1}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        OpenGraph({1, 2}, {{1, 2}}, {5}, {2}, {1}), std::invalid_argument);
    CHECK_THROWS_AS(
        OpenGraph({1, 2}, {{1, 2}}, {}, {2}, {1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(
        OpenGraph({1, 2, 3}, {{1, 2}, {2, 3}}, {}, {3}, {1}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        OpenGraph({1, 2, 3}, {{1, 2}, {2, 3}}, {}, {3}, {1, 1, 2}),
        std::invalid_argument);
  }
}

SCENARIO("Neighbourhoods", "[graph]") {
  OpenGraph g = grover_graph();
  CHECK(neighbours(g, 1) == std::set<Vertex>{2, 4});
  CHECK(neighbours(g, 7) == std::set<Vertex>{6, 8});
  CHECK(neighbours(path3(), 2) == std::set<Vertex>{1, 3});
  CHECK_THROWS_AS(neighbours(g, 42), std::out_of_range);
}

SCENARIO("Flow validation", "[graph]") {
  GIVEN("The Grover cluster with row flow") {
    CHECK(validate_flow(grover_graph(), kGroverFlow).ok());
  }
  GIVEN("A path") {
    OpenGraph g = path3();
    CHECK(validate_flow(g, {{1, 2}, {2, 3}}).ok());
    WHEN("a maps to the non-adjacent c") {
      auto r = validate_flow(g, {{1, 3}, {2, 3}});
      CHECK(r.has(Condition::FlowAdjacent));
      CHECK(r.has(Condition::FlowInjective));
    }
    WHEN("a measured vertex has no successor") {
      CHECK(validate_flow(g, {{1, 2}}).has(Condition::FlowUndefined));
    }
    WHEN("an output is given a successor") {
      auto r = validate_flow(g, {{1, 2}, {2, 3}, {3, 2}});
      CHECK(r.has(Condition::FlowDomain));
    }
  }
  GIVEN("A flow into an input") {
    OpenGraph g({1, 2, 3}, {{1, 2}, {2, 3}}, {1, 2}, {3}, {1, 2});
    CHECK(validate_flow(g, {{1, 2}, {2, 3}}).has(Condition::FlowCodomain));
  }
  GIVEN("A flow against the order") {
    // order 2 before 1, but f(2) = 1
    OpenGraph g({1, 2, 3}, {{1, 2}, {1, 3}}, {}, {3}, {2, 1});
    auto r = validate_flow(g, {{2, 1}, {1, 3}});
    CHECK(r.ok());
    OpenGraph h({1, 2, 3}, {{1, 2}, {1, 3}}, {}, {3}, {1, 2});
    auto s = validate_flow(h, {{2, 1}, {1, 3}});
    CHECK(s.has(Condition::FlowOrder));
  }
  GIVEN("A neighbour of f(v) measured before v") {
    // f(1) = 3 is adjacent to 2, which is measured before 1
    OpenGraph g({1, 2, 3, 4}, {{1, 3}, {2, 3}, {2, 4}}, {}, {3, 4}, {2, 1});
    auto r = validate_flow(g, {{1, 3}, {2, 4}});
    CHECK(r.has(Condition::FlowNeighbourOrder));
    CHECK_FALSE(r.summary().empty());
  }
}

SCENARIO("Colouring validation", "[graph]") {
  CHECK(validate_colouring(grover_graph(), {{{1, 3, 5, 7}, {2, 4, 6, 8}}}).ok());
  CHECK(validate_colouring(OpenGraph({1}, {}, {}, {1}, {}), {{{1}}}).ok());
  OpenGraph edge({1, 2}, {{1, 2}}, {}, {2}, {1});
  CHECK(validate_colouring(edge, {{{1, 2}}})
            .has(Condition::ColouringMonochromaticEdge));
  CHECK(validate_colouring(edge, {{{1}}}).has(Condition::ColouringMissing));
  CHECK(validate_colouring(edge, {{{1}, {1, 2}}})
            .has(Condition::ColouringOverlap));
  CHECK(validate_colouring(edge, {{{1}, {2, 9}}})
            .has(Condition::ColouringUnknownVertex));
}

SCENARIO("Random bipartite graphs accept their bipartition only", "[graph]") {
  Engine rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int left = 1 + static_cast<int>(random_below(rng, 5));
    const int right = 1 + static_cast<int>(random_below(rng, 5));
    std::vector<Vertex> vs, ls, rs;
    for (int i = 0; i < left + right; ++i) vs.push_back(i);
    for (int i = 0; i < left; ++i) ls.push_back(i);
    for (int i = left; i < left + right; ++i) rs.push_back(i);
    // spanning tree first so the graph is connected
    std::vector<Edge> es;
    for (int r = left; r < left + right; ++r)
      es.emplace_back(static_cast<int>(random_below(rng, left)), r);
    for (int l = 0; l < left; ++l) es.emplace_back(l, left);
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());
    std::vector<Vertex> order(vs.begin(), vs.end() - 1);
    OpenGraph g(vs, es, {}, {vs.back()}, order);
    CHECK(validate_colouring(g, {{ls, rs}}).ok());
    // move one endpoint of a random edge into the other class
    const Edge e = es[random_below(rng, es.size())];
    std::vector<Vertex> l2 = ls, r2 = rs;
    r2.erase(std::find(r2.begin(), r2.end(), e.second));
    l2.push_back(e.second);
    CHECK(validate_colouring(g, {{l2, r2}})
              .has(Condition::ColouringMonochromaticEdge));
  }
}

SCENARIO("Flows are consistent with the measurement order", "[graph]") {
  // brute force over all pairs the flow orders: v < f(v) and v < u for
  // u in N(f(v)) \ {v}
  Engine rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    auto p = testing::random_flow_pattern(rng, {2, 12, 4, 0.3});
    const OpenGraph& g = p.graph();
    REQUIRE(validate_flow(g, p.flow()).ok());
    for (const auto& [v, fv] : p.flow()) {
      CHECK(g.precedes(v, fv));
      for (Vertex u : g.neighbours(fv))
        if (u != v) CHECK(g.precedes(v, u));
    }
  }
}

SCENARIO("Graph documents round-trip through JSON", "[graph]") {
  Colouring col{{{1, 3, 5, 7}, {2, 4, 6, 8}}};
  std::string text = graph_to_json(grover_graph(), kGroverFlow, col);
  GraphDocument doc = graph_from_json(text);
  CHECK(doc.graph.edges() == grover_graph().edges());
  CHECK(doc.graph.order() == grover_graph().order());
  CHECK(doc.flow == kGroverFlow);
  CHECK(doc.colouring.classes == col.classes);
  CHECK(graph_to_json(doc.graph, doc.flow, doc.colouring) == text);
  CHECK_THROWS_AS(graph_from_json("{"), std::invalid_argument);
  CHECK_THROWS_AS(graph_from_json(R"({"vertices": [1]})"),
                  std::invalid_argument);
}

}  // namespace test_graph
}  // namespace vbqc
