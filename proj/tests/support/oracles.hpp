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

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "vbqc/pattern.hpp"
#include "vbqc/rng.hpp"

namespace vbqc::testing {

/**
 * Output distribution of a pattern computed without the compiler or the
 * simulator: every vertex lives in one dense register (inputs |x>, the rest
 * |0>), all XX edges are applied, and every outcome branch of the measured
 * vertices is enumerated with angles adapted from the flow definition.
 */
std::map<std::vector<int>, double> pattern_output_distribution(
    const MeasurementPattern& p, const std::vector<int>& x);

/** The single output with probability > 1 - 1e-9; throws if there is none. */
std::vector<int> deterministic_output(
    const MeasurementPattern& p, const std::vector<int>& x);

/** Bit-level CNOT cascade: m times, for i = 0..n-2, b[i+1] ^= b[i]. */
std::vector<int> classical_cnot_cascade(std::vector<int> b, int m);

/** rho -> sum_k K rho K^dag. */
Eigen::Matrix2cd evolve(
    const std::vector<Eigen::MatrixXcd>& kraus, const Eigen::Matrix2cd& rho);

struct RandomPatternSpec {
  int min_vertices = 2;
  int max_vertices = 10;
  int max_outputs = 3;
  double extra_edge_probability = 0.3;
};

/**
 * A random connected open graph with flow: vertices are spread over chains
 * whose successor map is the flow, chains are interleaved into a random
 * order and extra edges are kept only if the flow stays valid. The colouring
 * is a greedy proper colouring in a random vertex order, and measured
 * vertices get uniform angles.
 */
MeasurementPattern random_flow_pattern(
    Engine& rng, const RandomPatternSpec& spec = {});

}  // namespace vbqc::testing
