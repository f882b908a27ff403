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

#include "vbqc/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json_io.hpp"

namespace vbqc {

Angle Angle::from_radians(double r) {
  double steps = r / (std::numbers::pi / 4.0);
  double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9)
    throw std::invalid_argument(
        "angle " + std::to_string(r) + " is not a multiple of pi/4");
  return from_steps(static_cast<int>(std::fmod(rounded, 8.0)));
}

std::string to_string(Angle a) {
  switch (a.steps()) {
    case 0: return "0";
    case 4: return "pi";
    default: return std::to_string(a.steps()) + "pi/4";
  }
}

MeasurementPattern::MeasurementPattern(
    OpenGraph graph, Flow flow, std::map<Vertex, Angle> angles,
    Colouring colouring)
    : graph_(std::move(graph)),
      flow_(std::move(flow)),
      angles_(std::move(angles)),
      colouring_(std::move(colouring)) {
  if (auto r = validate_flow(graph_, flow_); !r.ok())
    throw std::invalid_argument("invalid flow: " + r.summary());
  if (auto r = validate_colouring(graph_, colouring_); !r.ok())
    throw std::invalid_argument("invalid colouring: " + r.summary());
  if (colouring_.classes.empty())
    throw std::invalid_argument("pattern needs at least one colour class");
  for (const auto& [v, a] : angles_)
    if (!graph_.contains(v))
      throw std::invalid_argument(
          "angle given for unknown vertex " + std::to_string(v));
  for (Vertex v : graph_.order())
    if (!angles_.count(v))
      throw std::invalid_argument(
          "measured vertex " + std::to_string(v) + " has no angle");
  for (Vertex o : graph_.outputs()) angles_.try_emplace(o, Angle::zero());

  inverse_ = vbqc::inverse_flow(flow_);
  for (Vertex v : graph_.vertices()) x_deps_[v];
  for (const auto& [u, fu] : flow_)
    for (Vertex w : graph_.neighbours(fu))
      if (w != u) x_deps_[w].push_back(u);
}

const Vertex* MeasurementPattern::z_dependency(Vertex v) const {
  auto it = inverse_.find(v);
  return it == inverse_.end() ? nullptr : &it->second;
}

MeasurementPattern grover_pattern(int tau) {
  if (tau < 0 || tau > 3)
    throw std::invalid_argument(
        "tau must be in {0,1,2,3}, got " + std::to_string(tau));
  // Rows 1-4-5-8 and 2-3-6-7, rungs 1-2 and 7-8.
  OpenGraph graph(
      {1, 2, 3, 4, 5, 6, 7, 8},
      {{1, 2}, {2, 3}, {1, 4}, {3, 6}, {4, 5}, {6, 7}, {5, 8}, {7, 8}},
      {1, 2}, {7, 8}, {1, 2, 3, 4, 5, 6});
  Flow flow{{1, 4}, {4, 5}, {5, 8}, {2, 3}, {3, 6}, {6, 7}};
  const Angle pi = Angle::pi();
  const Angle zero = Angle::zero();
  // oracle angles (phi_3, phi_4) by query
  static constexpr int kOracle[4][2] = {{1, 1}, {1, 0}, {0, 1}, {0, 0}};
  std::map<Vertex, Angle> angles{
      {1, zero},
      {2, zero},
      {3, Angle::pi_times(kOracle[tau][0])},
      {4, Angle::pi_times(kOracle[tau][1])},
      {5, zero},
      {6, zero},
      {7, pi},
      {8, pi}};
  Colouring colouring{{{1, 3, 5, 7}, {2, 4, 6, 8}}};
  return MeasurementPattern(
      std::move(graph), std::move(flow), std::move(angles),
      std::move(colouring));
}

int cnot_grid_vertex_count(int n, int m) { return n * (2 * m + 3); }

MeasurementPattern cnot_grid_pattern(
    int n, int m, const std::vector<int>& b) {
  if (n < 2) throw std::invalid_argument("cnot grid needs n >= 2 wires");
  if (m < 1) throw std::invalid_argument("cnot grid needs m >= 1 layers");
  if (b.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("input bit vector must have length n");
  for (int bit : b)
    if (bit != 0 && bit != 1)
      throw std::invalid_argument("input bits must be 0 or 1");

  // Columns of wire i: 0 (input), 1, then per layer l the pair
  // (2 + l*(n+1) + i, 2 + l*(n+1) + i + 1), and finally the output column.
  const int output_column = 2 + m * (n + 1);
  std::vector<std::vector<int>> columns(n);
  for (int i = 0; i < n; ++i) {
    columns[i] = {0, 1};
    for (int l = 0; l < m; ++l) {
      int base = 2 + l * (n + 1) + i;
      columns[i].push_back(base);
      columns[i].push_back(base + 1);
    }
    columns[i].push_back(output_column);
  }

  // Vertex ids follow the measurement order: column-major, wire-minor.
  std::vector<std::pair<int, int>> cells;  // (column, wire)
  for (int i = 0; i < n; ++i)
    for (int c : columns[i]) cells.emplace_back(c, i);
  std::sort(cells.begin(), cells.end());
  std::map<std::pair<int, int>, Vertex> id;  // (wire, column) -> vertex
  Vertex next = 1;
  for (const auto& [c, i] : cells) id[{i, c}] = next++;

  std::vector<Vertex> vertices, inputs, outputs, order;
  std::vector<Edge> edges;
  Flow flow;
  std::map<Vertex, Angle> angles;
  // A vertical edge joins position 2l+3 of wire i to position 2l+2 of wire
  // i+1, so the parity of the position along the wire is a 2-colouring.
  std::map<Vertex, int> position;
  for (int i = 0; i < n; ++i)
    for (std::size_t k = 0; k < columns[i].size(); ++k)
      position[id[{i, columns[i][k]}]] = static_cast<int>(k);
  Colouring colouring{{{}, {}}};
  for (const auto& [c, i] : cells) {
    Vertex v = id[{i, c}];
    vertices.push_back(v);
    colouring.classes[position[v] % 2].push_back(v);
    if (c == output_column) continue;
    order.push_back(v);
    angles[v] = c == 0 ? Angle::pi_times(b[i]) : Angle::zero();
  }
  for (int i = 0; i < n; ++i) {
    inputs.push_back(id[{i, 0}]);
    outputs.push_back(id[{i, output_column}]);
    angles[id[{i, output_column}]] = Angle::zero();
    for (std::size_t k = 0; k + 1 < columns[i].size(); ++k) {
      Vertex u = id[{i, columns[i][k]}];
      Vertex w = id[{i, columns[i][k + 1]}];
      edges.emplace_back(u, w);
      flow[u] = w;
    }
  }
  for (int l = 0; l < m; ++l)
    for (int i = 0; i + 1 < n; ++i) {
      int c = 2 + l * (n + 1) + i + 1;
      edges.emplace_back(id[{i, c}], id[{i + 1, c}]);
    }

  OpenGraph graph(
      std::move(vertices), std::move(edges), std::move(inputs),
      std::move(outputs), std::move(order));
  return MeasurementPattern(
      std::move(graph), std::move(flow), std::move(angles),
      std::move(colouring));
}

std::vector<int> cnot_grid_expected_output(
    int n, int m, std::vector<int> b) {
  if (b.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("input bit vector must have length n");
  for (int l = 0; l < m; ++l)
    for (int c = 1; c < n; ++c) b[c] ^= b[c - 1];
  return b;
}

PatternStats pattern_stats(const MeasurementPattern& p) {
  const OpenGraph& g = p.graph();
  // Longest path over "u must be measured (and decoded) before v".
  std::map<Vertex, std::size_t> depth;
  std::vector<Vertex> sequence = g.order();
  sequence.insert(sequence.end(), g.outputs().begin(), g.outputs().end());
  std::size_t best = 0;
  for (Vertex v : sequence) {
    std::size_t d = 1;
    if (const Vertex* z = p.z_dependency(v)) d = std::max(d, depth[*z] + 1);
    for (Vertex u : p.x_dependencies(v)) d = std::max(d, depth[u] + 1);
    depth[v] = d;
    best = std::max(best, d);
  }
  return {g.size(), g.edges().size(), g.outputs().size(), best};
}

std::string pattern_to_json(const MeasurementPattern& p) {
  auto doc = detail::graph_to_json_value(p.graph(), p.flow(), p.colouring());
  nlohmann::json angles = nlohmann::json::object();
  for (const auto& [v, a] : p.angles()) angles[std::to_string(v)] = a.steps();
  doc["angles"] = angles;
  return doc.dump(2);
}

MeasurementPattern pattern_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
  }
  GraphDocument g = detail::graph_from_json_value(doc);
  std::map<Vertex, Angle> angles;
  try {
    for (const auto& [key, value] : doc.at("angles").items())
      angles[std::stoi(key)] = Angle::from_steps(value.get<int>());
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed angles: ") + e.what());
  } catch (const std::logic_error&) {
    throw std::invalid_argument("angle keys must be vertex ids");
  }
  return MeasurementPattern(
      std::move(g.graph), std::move(g.flow), std::move(angles),
      std::move(g.colouring));
}

}  // namespace vbqc
