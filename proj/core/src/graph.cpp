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

#include "vbqc/graph.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "json_io.hpp"

namespace vbqc {

Edge make_edge(Vertex u, Vertex v) {
  return u < v ? Edge{u, v} : Edge{v, u};
}

namespace {

std::string vstr(Vertex v) { return std::to_string(v); }

void require_subset(
    const std::vector<Vertex>& subset, const std::set<Vertex>& all,
    const char* what) {
  std::set<Vertex> seen;
  for (Vertex v : subset) {
    if (!all.count(v))
      throw std::invalid_argument(
          std::string(what) + " vertex " + vstr(v) + " is not in the graph");
    if (!seen.insert(v).second)
      throw std::invalid_argument(
          std::string(what) + " vertex " + vstr(v) + " listed twice");
  }
}

}  // namespace

OpenGraph::OpenGraph(
    std::vector<Vertex> vertices, std::vector<Edge> edges,
    std::vector<Vertex> inputs, std::vector<Vertex> outputs,
    std::vector<Vertex> order)
    : vertices_(std::move(vertices)),
      inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      order_(std::move(order)) {
  if (vertices_.empty())
    throw std::invalid_argument("open graph needs at least one vertex");
  std::sort(vertices_.begin(), vertices_.end());
  if (std::adjacent_find(vertices_.begin(), vertices_.end()) !=
      vertices_.end())
    throw std::invalid_argument("duplicate vertex id");
  for (Vertex v : vertices_) adjacency_[v];

  std::set<Edge> seen;
  for (const auto& [a, b] : edges) {
    if (a == b)
      throw std::invalid_argument("self-loop on vertex " + vstr(a));
    if (!adjacency_.count(a) || !adjacency_.count(b))
      throw std::invalid_argument(
          "edge {" + vstr(a) + "," + vstr(b) + "} uses an unknown vertex");
    Edge e = make_edge(a, b);
    if (!seen.insert(e).second)
      throw std::invalid_argument(
          "duplicate edge {" + vstr(e.first) + "," + vstr(e.second) + "}");
    adjacency_[a].insert(b);
    adjacency_[b].insert(a);
  }
  edges_.assign(seen.begin(), seen.end());

  // connectivity by BFS from the first vertex
  std::set<Vertex> reached{vertices_.front()};
  std::queue<Vertex> frontier;
  frontier.push(vertices_.front());
  while (!frontier.empty()) {
    Vertex v = frontier.front();
    frontier.pop();
    for (Vertex u : adjacency_[v])
      if (reached.insert(u).second) frontier.push(u);
  }
  if (reached.size() != vertices_.size())
    throw std::invalid_argument("graph is not connected");

  std::set<Vertex> all(vertices_.begin(), vertices_.end());
  require_subset(inputs_, all, "input");
  require_subset(outputs_, all, "output");
  require_subset(order_, all, "ordered");
  input_set_.insert(inputs_.begin(), inputs_.end());
  output_set_.insert(outputs_.begin(), outputs_.end());

  for (std::size_t i = 0; i < order_.size(); ++i) {
    if (output_set_.count(order_[i]))
      throw std::invalid_argument(
          "output vertex " + vstr(order_[i]) +
          " must not appear in the measurement order");
    position_[order_[i]] = i;
  }
  if (order_.size() + outputs_.size() != vertices_.size())
    throw std::invalid_argument(
        "measurement order must list every non-output vertex exactly once");
  for (Vertex o : outputs_) position_[o] = order_.size();
}

bool OpenGraph::is_input(Vertex v) const { return input_set_.count(v) != 0; }
bool OpenGraph::is_output(Vertex v) const {
  return output_set_.count(v) != 0;
}

bool OpenGraph::adjacent(Vertex u, Vertex v) const {
  auto it = adjacency_.find(u);
  return it != adjacency_.end() && it->second.count(v) != 0;
}

const std::set<Vertex>& OpenGraph::neighbours(Vertex v) const {
  auto it = adjacency_.find(v);
  if (it == adjacency_.end())
    throw std::out_of_range("unknown vertex " + vstr(v));
  return it->second;
}

std::size_t OpenGraph::position(Vertex v) const {
  auto it = position_.find(v);
  if (it == position_.end())
    throw std::out_of_range("unknown vertex " + vstr(v));
  return it->second;
}

std::set<Vertex> neighbours(const OpenGraph& graph, Vertex v) {
  return graph.neighbours(v);
}

std::map<Vertex, Vertex> inverse_flow(const Flow& flow) {
  std::map<Vertex, Vertex> inv;
  for (const auto& [v, fv] : flow) inv[fv] = v;
  return inv;
}

std::string_view to_string(Condition c) {
  switch (c) {
    case Condition::FlowDomain: return "flow-domain";
    case Condition::FlowCodomain: return "flow-codomain";
    case Condition::FlowUndefined: return "flow-undefined";
    case Condition::FlowInjective: return "flow-injective";
    case Condition::FlowAdjacent: return "flow-adjacent";
    case Condition::FlowOrder: return "flow-order";
    case Condition::FlowNeighbourOrder: return "flow-neighbour-order";
    case Condition::ColouringUnknownVertex: return "colouring-unknown-vertex";
    case Condition::ColouringOverlap: return "colouring-overlap";
    case Condition::ColouringMissing: return "colouring-missing";
    case Condition::ColouringMonochromaticEdge:
      return "colouring-monochromatic-edge";
  }
  return "unknown";
}

bool ValidationResult::has(Condition c) const {
  return std::any_of(violations.begin(), violations.end(), [c](const auto& x) {
    return x.condition == c;
  });
}

std::string ValidationResult::summary() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << to_string(violations[i].condition) << ": " << violations[i].message;
  }
  return os.str();
}

ValidationResult validate_flow(const OpenGraph& graph, const Flow& flow) {
  ValidationResult result;
  auto add = [&](Condition c, Vertex u, Vertex v, std::string msg) {
    result.violations.push_back({c, u, v, std::move(msg)});
  };

  for (Vertex v : graph.order())
    if (!flow.count(v))
      add(Condition::FlowUndefined, v, v,
          "measured vertex " + vstr(v) + " has no flow successor");

  std::map<Vertex, Vertex> image_owner;
  for (const auto& [v, fv] : flow) {
    if (!graph.contains(v) || graph.is_output(v)) {
      add(Condition::FlowDomain, v, fv,
          "f is defined on " + vstr(v) + ", which is not a measured vertex");
      continue;
    }
    if (!graph.contains(fv) || graph.is_input(fv)) {
      add(Condition::FlowCodomain, v, fv,
          "f(" + vstr(v) + ") = " + vstr(fv) + " is not a non-input vertex");
      continue;
    }
    auto [it, fresh] = image_owner.emplace(fv, v);
    if (!fresh)
      add(Condition::FlowInjective, it->second, v,
          "f(" + vstr(it->second) + ") = f(" + vstr(v) + ") = " + vstr(fv));
    if (!graph.adjacent(v, fv))
      add(Condition::FlowAdjacent, v, fv,
          vstr(fv) + " is not adjacent to " + vstr(v));
    if (!graph.precedes(v, fv))
      add(Condition::FlowOrder, v, fv,
          vstr(v) + " does not precede f(" + vstr(v) + ") = " + vstr(fv));
    for (Vertex u : graph.neighbours(fv)) {
      if (u == v) continue;
      if (!graph.precedes(v, u))
        add(Condition::FlowNeighbourOrder, v, u,
            vstr(u) + " is a neighbour of f(" + vstr(v) + ") = " + vstr(fv) +
                " but does not come after " + vstr(v));
    }
  }
  return result;
}

ValidationResult validate_colouring(
    const OpenGraph& graph, const Colouring& colouring) {
  ValidationResult result;
  std::map<Vertex, std::size_t> colour_of;
  for (std::size_t k = 0; k < colouring.classes.size(); ++k) {
    for (Vertex v : colouring.classes[k]) {
      if (!graph.contains(v)) {
        result.violations.push_back(
            {Condition::ColouringUnknownVertex, v, v,
             "vertex " + vstr(v) + " in class " + std::to_string(k) +
                 " is not in the graph"});
        continue;
      }
      auto [it, fresh] = colour_of.emplace(v, k);
      if (!fresh)
        result.violations.push_back(
            {Condition::ColouringOverlap, v, v,
             "vertex " + vstr(v) + " is in classes " +
                 std::to_string(it->second) + " and " + std::to_string(k)});
    }
  }
  for (Vertex v : graph.vertices())
    if (!colour_of.count(v))
      result.violations.push_back(
          {Condition::ColouringMissing, v, v,
           "vertex " + vstr(v) + " has no colour"});
  for (const auto& [u, v] : graph.edges()) {
    auto cu = colour_of.find(u);
    auto cv = colour_of.find(v);
    if (cu != colour_of.end() && cv != colour_of.end() &&
        cu->second == cv->second)
      result.violations.push_back(
          {Condition::ColouringMonochromaticEdge, u, v,
           "edge {" + vstr(u) + "," + vstr(v) + "} lies inside class " +
               std::to_string(cu->second)});
  }
  return result;
}

namespace detail {

nlohmann::json graph_to_json_value(
    const OpenGraph& graph, const Flow& flow, const Colouring& colouring) {
  nlohmann::json doc;
  doc["vertices"] = graph.vertices();
  auto edges = nlohmann::json::array();
  for (const auto& [u, v] : graph.edges()) edges.push_back({u, v});
  doc["edges"] = edges;
  doc["inputs"] = graph.inputs();
  doc["outputs"] = graph.outputs();
  doc["order"] = graph.order();
  auto f = nlohmann::json::array();
  for (const auto& [v, fv] : flow) f.push_back({v, fv});
  doc["flow"] = f;
  doc["colour_classes"] = colouring.classes;
  return doc;
}

GraphDocument graph_from_json_value(const nlohmann::json& doc) {
  try {
    std::vector<Edge> edges;
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument("edges must be [u, v] pairs");
      edges.push_back({e[0].get<Vertex>(), e[1].get<Vertex>()});
    }
    OpenGraph graph(
        doc.at("vertices").get<std::vector<Vertex>>(), std::move(edges),
        doc.at("inputs").get<std::vector<Vertex>>(),
        doc.at("outputs").get<std::vector<Vertex>>(),
        doc.at("order").get<std::vector<Vertex>>());
    Flow flow;
    if (doc.contains("flow")) {
      for (const auto& p : doc.at("flow")) {
        if (!p.is_array() || p.size() != 2)
          throw std::invalid_argument("flow must be a list of [v, f(v)] pairs");
        if (!flow.emplace(p[0].get<Vertex>(), p[1].get<Vertex>()).second)
          throw std::invalid_argument("flow defined twice on a vertex");
      }
    }
    Colouring colouring;
    if (doc.contains("colour_classes"))
      colouring.classes =
          doc.at("colour_classes").get<std::vector<std::vector<Vertex>>>();
    return GraphDocument{std::move(graph), std::move(flow),
                         std::move(colouring)};
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed graph document: ") +
                                e.what());
  }
}

}  // namespace detail

std::string graph_to_json(
    const OpenGraph& graph, const Flow& flow, const Colouring& colouring) {
  return detail::graph_to_json_value(graph, flow, colouring).dump(2);
}

GraphDocument graph_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
  }
  return detail::graph_from_json_value(doc);
}

}  // namespace vbqc
