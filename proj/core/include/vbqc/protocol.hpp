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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vbqc/compiler.hpp"
#include "vbqc/pattern.hpp"
#include "vbqc/rng.hpp"
#include "vbqc/simulator.hpp"

namespace vbqc {

struct ProtocolParams {
  int d = 1;  // computation rounds
  int t = 1;  // test rounds
  int w = 1;  // abort once c_fail reaches w
  MeasurementPattern pattern;
  std::vector<int> x;  // input bits, laid out as pattern.graph().inputs()
  double p = 0.0;      // inherent error of the computation, in [0, 1/2)

  int n() const { return d + t; }
  /** Throws std::invalid_argument. */
  void validate() const;
};

enum class RoundKind { kComputation, kTest };

std::string_view to_string(RoundKind k);

struct VertexSecret {
  /**
   * theta_v for computation vertices and traps. For dummies this holds the
   * random measurement angle instead, which shares the pad bits.
   */
  Angle theta;
  int r = 0;
  int d = 0;
  bool trap = false;
  bool dummy = false;
};

struct RoundSecrets {
  RoundKind kind = RoundKind::kComputation;
  int colour = -1;  // test rounds only
  std::map<Vertex, VertexSecret> vertices;
};

struct RoundResult {
  RoundKind kind = RoundKind::kComputation;
  int colour = -1;
  std::map<Vertex, int> outcomes;     // raw b_v
  std::map<Vertex, bool> trap_passed;  // test rounds
  std::vector<int> output;            // computation rounds, decoded y
  int attempts = 1;

  /** A test round passes iff every trap passes. */
  bool passed() const;
};

/** Fresh secrets for one round, drawn uniformly from their domains. */
RoundSecrets draw_secrets(
    const MeasurementPattern& p, RoundKind kind, Engine& rng);

/**
 * Chooses which t of the n rounds are tests uniformly at random, then draws
 * each round's secrets.
 */
std::vector<RoundSecrets> plan_rounds(
    const ProtocolParams& params, Engine& rng);

/**
 * Fills bits 2-8 and the input scratch bits of every vertex from the round
 * secrets, before any quantum operation.
 */
RegisterFile load_registers(
    const MeasurementPattern& p, const RoundSecrets& secrets,
    const std::vector<int>& x);

/**
 * Measurement angle of v from its registers.
 *
 * Computation rounds: theta~ + (-1)^z phi + s pi + r pi, where theta~ adds
 * x_v pi on inputs, z is the Z accumulator and s the X accumulator. Outputs
 * leave s out; their X correction is applied to the decoded bit instead.
 * Test rounds: theta + r pi for traps and the stored random angle for
 * dummies.
 *
 * Throws std::logic_error if a correction source of v is still unmeasured.
 */
Angle compute_delta(
    const MeasurementPattern& p, Vertex v, const RegisterFile& regs);

/** Runs one shot of a round through the simulator. */
RoundResult execute_round(
    const MeasurementPattern& p, const LazySchedule& schedule,
    const RoundSecrets& secrets, const std::vector<int>& x,
    const NoiseModel& noise, Engine rng);

/**
 * Output of the pattern itself: a noiseless computation round with every
 * pad set to zero.
 */
std::vector<int> reference_output(
    const MeasurementPattern& p, const std::vector<int>& x, Engine rng);

struct RateEstimate {
  double mean = 0.0;
  double std = 0.0;
};

/**
 * Draws `resamples` bootstrap samples of `sample` flags with replacement and
 * returns the mean and sample standard deviation of their means. Throws
 * std::invalid_argument if fewer than `sample` flags are given.
 */
RateEstimate bootstrap_rates(
    const std::vector<bool>& flags, std::size_t sample, std::size_t resamples,
    Engine& rng);

/** Largest tolerable w/t for k colours: (1/k)(2p-1)/(2p-2). */
double threshold_bound(int k, double p);

struct VerdictReport {
  int c_fail = 0;
  bool accepted = false;
  std::optional<std::vector<int>> output;  // set iff accepted
  std::optional<std::vector<int>> majority;
  double test_failure_rate = 0.0;
  std::optional<double> incorrect_output_rate;
  std::optional<RateEstimate> test_failure_bootstrap;
  std::optional<RateEstimate> incorrect_output_bootstrap;
  std::vector<RoundResult> rounds;
};

/**
 * Verdict over finished rounds: abort iff c_fail >= w or no output is
 * returned by strictly more than half of the computation rounds.
 */
VerdictReport decide(const std::vector<RoundResult>& rounds, int w);

struct RunOptions {
  std::uint64_t seed = 0;
  int workers = 1;
  /** Enables the incorrect output rate. */
  std::optional<std::vector<int>> ground_truth;
  /**
   * Called after each attempt of a round; returning true discards the
   * attempt and reruns the round with fresh secrets. Called concurrently
   * when workers > 1.
   */
  std::function<bool(std::size_t round, int attempt)> redo;
  int max_attempts = 16;
  /** Bootstrap sample size, clamped to the available rounds; 0 disables. */
  std::size_t bootstrap_sample = 800;
  std::size_t bootstrap_resamples = 10;
};

/**
 * The whole protocol end to end. Randomness is derived from options.seed per round
 * and attempt, so the report does not depend on options.workers.
 */
VerdictReport run_protocol(
    const ProtocolParams& params, const NoiseModel& noise,
    const RunOptions& options);

/** Columns: round,kind,colour,passed,output. */
std::string rounds_to_csv(
    const VerdictReport& report,
    const std::optional<std::vector<int>>& ground_truth = std::nullopt);

std::string report_to_json(const VerdictReport& report);

}  // namespace vbqc
