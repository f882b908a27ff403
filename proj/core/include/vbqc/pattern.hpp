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

#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "vbqc/graph.hpp"

namespace vbqc {

/**
 * An angle from the discrete set {j*pi/4 | j = 0..7}, stored as j.
 * All one-time-pad arithmetic happens on j modulo 8.
 */
class Angle {
 public:
  constexpr Angle() = default;

  static constexpr Angle from_steps(int j) {
    return Angle(static_cast<std::uint8_t>(((j % 8) + 8) % 8));
  }
  /** Throws std::invalid_argument unless r is a multiple of pi/4 (1e-9). */
  static Angle from_radians(double r);

  static constexpr Angle zero() { return Angle(0); }
  static constexpr Angle pi() { return Angle(4); }

  constexpr int steps() const { return steps_; }
  constexpr double radians() const { return steps_ * std::numbers::pi / 4.0; }

  constexpr Angle operator+(Angle o) const {
    return from_steps(steps_ + o.steps_);
  }
  constexpr Angle operator-() const { return from_steps(-steps_); }
  constexpr Angle operator-(Angle o) const { return *this + (-o); }
  constexpr bool operator==(const Angle&) const = default;

  /** pi if bit is set, otherwise 0. */
  static constexpr Angle pi_times(int bit) { return Angle(bit ? 4 : 0); }

 private:
  constexpr explicit Angle(std::uint8_t j) : steps_(j) {}
  std::uint8_t steps_ = 0;
};

std::string to_string(Angle a);

/**
 * An MBQC computation {(G, I, O), phi, f} plus the k-colouring used by test
 * rounds. Every vertex carries an angle; outputs default to 0 when the
 * caller supplies none. Throws std::invalid_argument if the flow or colouring
 * does not validate or a measured vertex has no angle.
 */
class MeasurementPattern {
 public:
  MeasurementPattern(
      OpenGraph graph, Flow flow, std::map<Vertex, Angle> angles,
      Colouring colouring);

  const OpenGraph& graph() const { return graph_; }
  const Flow& flow() const { return flow_; }
  const std::map<Vertex, Vertex>& inverse_flow() const { return inverse_; }
  const Colouring& colouring() const { return colouring_; }
  Angle angle(Vertex v) const { return angles_.at(v); }
  const std::map<Vertex, Angle>& angles() const { return angles_; }

  /** Vertices u != v with v in N(f(u)); their outcomes add pi to v's angle. */
  const std::vector<Vertex>& x_dependencies(Vertex v) const {
    return x_deps_.at(v);
  }
  /** f^{-1}(v) if any; its outcome flips the sign of v's angle. */
  const Vertex* z_dependency(Vertex v) const;

 private:
  OpenGraph graph_;
  Flow flow_;
  std::map<Vertex, Vertex> inverse_;
  std::map<Vertex, Angle> angles_;
  Colouring colouring_;
  std::map<Vertex, std::vector<Vertex>> x_deps_;
};

/**
 * Two-qubit Grover search on the 4x2 cluster, vertices 1..8, for database
 * element tau in {0,1,2,3}. Throws std::invalid_argument otherwise.
 */
MeasurementPattern grover_pattern(int tau);

/**
 * m layers of the staggered CNOT cascade CNOT(1->2), ..., CNOT(n-1->n) on n
 * wires, with the classical input b loaded through the input angles b_i*pi.
 *
 * Each wire is a horizontal chain: an input vertex, one vertex that turns
 * |b_i> into the computational frame, two vertices per layer and a final
 * output vertex, so the pattern has n*(2m+3) vertices. The CNOT from wire i
 * to wire i+1 in a layer is the vertical edge between the second layer
 * vertex of wire i and the first layer vertex of wire i+1, which share a
 * column. Measurement order is column by column, flow runs along wires and
 * the colouring is the parity of the position along the wire.
 */
MeasurementPattern cnot_grid_pattern(int n, int m, const std::vector<int>& b);

/** n*(2m+3); the vertex count of cnot_grid_pattern(n, m, .). */
int cnot_grid_vertex_count(int n, int m);

/**
 * Ground truth for the CNOT grid: m times, for c = 1..n-1 in turn,
 * b[c] ^= b[c-1].
 */
std::vector<int> cnot_grid_expected_output(int n, int m, std::vector<int> b);

struct PatternStats {
  std::size_t vertices;
  std::size_t edges;
  std::size_t outputs;
  /** Longest chain in the correction dependency order, in vertices. */
  std::size_t depth;
};

PatternStats pattern_stats(const MeasurementPattern& p);

/** Graph JSON document plus `angles`: {"<vertex>": j} meaning j*pi/4. */
std::string pattern_to_json(const MeasurementPattern& p);
MeasurementPattern pattern_from_json(std::string_view text);

}  // namespace vbqc
