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

#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vbqc {

/** Opaque vertex identifier. */
using Vertex = int;

/** Undirected edge, stored with first < second. */
using Edge = std::pair<Vertex, Vertex>;

Edge make_edge(Vertex u, Vertex v);

/**
 * An open graph (G, I, O) together with a total measurement order over the
 * non-output vertices.
 *
 * The constructor checks every structural invariant and throws
 * std::invalid_argument on the first failure: the graph must be connected,
 * free of self-loops and duplicate edges, I and O must be subsets of V, and
 * `order` must list every non-output vertex exactly once.
 *
 * Output vertices are treated as measured after every vertex in `order`.
 */
class OpenGraph {
 public:
  OpenGraph(
      std::vector<Vertex> vertices, std::vector<Edge> edges,
      std::vector<Vertex> inputs, std::vector<Vertex> outputs,
      std::vector<Vertex> order);

  /** Vertices in ascending id order. */
  const std::vector<Vertex>& vertices() const { return vertices_; }
  /** Normalised edges in ascending order. */
  const std::vector<Edge>& edges() const { return edges_; }
  /** Inputs in the order supplied (this fixes the layout of x). */
  const std::vector<Vertex>& inputs() const { return inputs_; }
  /** Outputs in the order supplied (this fixes the layout of y). */
  const std::vector<Vertex>& outputs() const { return outputs_; }
  /** Measurement order of the non-output vertices. */
  const std::vector<Vertex>& order() const { return order_; }

  std::size_t size() const { return vertices_.size(); }
  bool contains(Vertex v) const { return adjacency_.count(v) != 0; }
  bool is_input(Vertex v) const;
  bool is_output(Vertex v) const;
  bool adjacent(Vertex u, Vertex v) const;

  /** Throws std::out_of_range for an unknown vertex. */
  const std::set<Vertex>& neighbours(Vertex v) const;

  /**
   * Position of v in the measurement order. Every output shares the position
   * order().size(), i.e. outputs come after all measured vertices.
   */
  std::size_t position(Vertex v) const;

  /** True iff u is measured strictly before v. */
  bool precedes(Vertex u, Vertex v) const { return position(u) < position(v); }

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<Vertex> inputs_;
  std::vector<Vertex> outputs_;
  std::vector<Vertex> order_;
  std::map<Vertex, std::set<Vertex>> adjacency_;
  std::map<Vertex, std::size_t> position_;
  std::set<Vertex> input_set_;
  std::set<Vertex> output_set_;
};

/** N_G(v). Throws std::out_of_range for an unknown vertex. */
std::set<Vertex> neighbours(const OpenGraph& graph, Vertex v);

/** Correction map f: O^c -> I^c. */
using Flow = std::map<Vertex, Vertex>;

/** Inverse of a flow (f(v) -> v). Assumes f is injective. */
std::map<Vertex, Vertex> inverse_flow(const Flow& flow);

/** An ordered k-colouring; class index is the colour. */
struct Colouring {
  std::vector<std::vector<Vertex>> classes;

  std::size_t size() const { return classes.size(); }
};

enum class Condition {
  // flow
  FlowDomain,        // key is not a measured (non-output) vertex
  FlowCodomain,      // image is an input or not a vertex
  FlowUndefined,     // measured vertex without a successor
  FlowInjective,     // two vertices share an image
  FlowAdjacent,      // f(v) is not a neighbour of v
  FlowOrder,         // f(v) does not come after v
  FlowNeighbourOrder,  // some u in N(f(v)), u != v, does not come after v
  // colouring
  ColouringUnknownVertex,
  ColouringOverlap,
  ColouringMissing,
  ColouringMonochromaticEdge,
};

std::string_view to_string(Condition c);

struct Violation {
  Condition condition;
  Vertex u;
  Vertex v;
  std::string message;
};

/** Violations are data; an empty list means the check passed. */
struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(Condition c) const;
  std::string summary() const;
};

ValidationResult validate_flow(const OpenGraph& graph, const Flow& flow);
ValidationResult validate_colouring(
    const OpenGraph& graph, const Colouring& colouring);

/** A graph with its flow and colouring, as exchanged in JSON documents. */
struct GraphDocument {
  OpenGraph graph;
  Flow flow;
  Colouring colouring;
};

/**
 * JSON document with fields `vertices`, `edges`, `inputs`, `outputs`, `order`,
 * `flow` (list of [v, f(v)] pairs) and `colour_classes`.
 */
std::string graph_to_json(
    const OpenGraph& graph, const Flow& flow, const Colouring& colouring);

/** Throws std::invalid_argument on malformed documents. */
GraphDocument graph_from_json(std::string_view text);

}  // namespace vbqc
