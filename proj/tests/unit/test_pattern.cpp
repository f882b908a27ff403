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
#include "vbqc/pattern.hpp"

namespace vbqc {
namespace test_pattern {

SCENARIO("Angles live on the eighth-turn lattice", "[pattern]") {
  CHECK(Angle::from_steps(9) == Angle::from_steps(1));
  CHECK(Angle::from_steps(-1).steps() == 7);
  CHECK((Angle::pi() + Angle::pi()) == Angle::zero());
  CHECK((-Angle::from_steps(3)).steps() == 5);
  CHECK(Angle::from_radians(5 * std::numbers::pi / 4).steps() == 5);
  CHECK(Angle::from_radians(-std::numbers::pi / 2).steps() == 6);
  CHECK_THROWS_AS(Angle::from_radians(0.1), std::invalid_argument);
  CHECK(Angle::pi_times(1) == Angle::pi());
  CHECK(to_string(Angle::from_steps(2)) == "2pi/4");
}

SCENARIO("Grover patterns", "[pattern]") {
  GIVEN("Each database element") {
    const std::pair<int, int> expected[4] = {{4, 4}, {4, 0}, {0, 4}, {0, 0}};
    for (int tau = 0; tau < 4; ++tau) {
      MeasurementPattern p = grover_pattern(tau);
      CHECK(p.angle(3).steps() == expected[tau].first);
      CHECK(p.angle(4).steps() == expected[tau].second);
      for (Vertex v : {1, 2, 5, 6}) CHECK(p.angle(v) == Angle::zero());
      CHECK(p.angle(7) == Angle::pi());
      CHECK(p.angle(8) == Angle::pi());
      CHECK(validate_flow(p.graph(), p.flow()).ok());
      CHECK(validate_colouring(p.graph(), p.colouring()).ok());
      CHECK(p.graph().inputs() == std::vector<Vertex>{1, 2});
      CHECK(p.graph().outputs() == std::vector<Vertex>{7, 8});
    }
  }
  GIVEN("An element out of range") {
    CHECK_THROWS_AS(grover_pattern(4), std::invalid_argument);
    CHECK_THROWS_AS(grover_pattern(-1), std::invalid_argument);
  }
  GIVEN("Correction dependencies") {
    MeasurementPattern p = grover_pattern(0);
    // f(1) = 4, so 1 corrects the sign of 4 and flips 5 (the other
    // neighbour of 4)
    REQUIRE(p.z_dependency(4) != nullptr);
    CHECK(*p.z_dependency(4) == 1);
    CHECK(p.z_dependency(1) == nullptr);
    CHECK(p.x_dependencies(5) == std::vector<Vertex>{1});
    // 7 neighbours f(3) = 6 and f(5) = 8; 8 neighbours f(4) = 5 and f(6) = 7
    CHECK(p.x_dependencies(7) == std::vector<Vertex>{3, 5});
    CHECK(p.x_dependencies(8) == std::vector<Vertex>{4, 6});
  }
}

SCENARIO("Pattern statistics", "[pattern]") {
  PatternStats s = pattern_stats(grover_pattern(0));
  CHECK(s.vertices == 8);
  CHECK(s.edges == 8);
  CHECK(s.outputs == 2);
  CHECK(s.depth == 4);

  OpenGraph path({1, 2, 3}, {{1, 2}, {2, 3}}, {1}, {3}, {1, 2});
  MeasurementPattern p(path, {{1, 2}, {2, 3}},
                       {{1, Angle::zero()}, {2, Angle::zero()}}, {{{1, 3}, {2}}});
  CHECK(pattern_stats(p).vertices == 3);
  CHECK(pattern_stats(p).depth == 3);
}

SCENARIO("CNOT grid patterns", "[pattern]") {
  GIVEN("The vertex-count formula") {
    for (int n = 2; n <= 6; ++n)
      for (int m = 1; m <= 6; ++m) {
        MeasurementPattern p = cnot_grid_pattern(n, m, std::vector<int>(n, 0));
        CHECK(pattern_stats(p).vertices ==
              static_cast<std::size_t>(cnot_grid_vertex_count(n, m)));
        CHECK(cnot_grid_vertex_count(n, m) == n * (2 * m + 3));
        CHECK(pattern_stats(p).outputs == static_cast<std::size_t>(n));
        // n chains, plus one vertical edge per CNOT
        CHECK(pattern_stats(p).edges ==
              static_cast<std::size_t>(n * (2 * m + 2) + m * (n - 1)));
      }
    // shapes that happen to give the sizes quoted for hardware and emulator
    CHECK(cnot_grid_vertex_count(4, 5) == 52);
    CHECK(cnot_grid_vertex_count(6, 5) == 78);
  }
  GIVEN("Input bits") {
    MeasurementPattern p = cnot_grid_pattern(3, 2, {1, 0, 1});
    const auto& in = p.graph().inputs();
    CHECK(p.angle(in[0]) == Angle::pi());
    CHECK(p.angle(in[1]) == Angle::zero());
    CHECK(p.angle(in[2]) == Angle::pi());
    for (Vertex v : p.graph().order())
      if (!p.graph().is_input(v)) CHECK(p.angle(v) == Angle::zero());
  }
  GIVEN("Bad dimensions") {
    CHECK_THROWS_AS(cnot_grid_pattern(1, 1, {0}), std::invalid_argument);
    CHECK_THROWS_AS(cnot_grid_pattern(2, 0, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(cnot_grid_pattern(2, 1, {0}), std::invalid_argument);
    CHECK_THROWS_AS(cnot_grid_pattern(2, 1, {0, 2}), std::invalid_argument);
  }
  GIVEN("The library's expected output") {
    CHECK(cnot_grid_expected_output(2, 1, {1, 0}) == std::vector<int>{1, 1});
    Engine rng(3);
    for (int trial = 0; trial < 100; ++trial) {
      int n = 2 + static_cast<int>(random_below(rng, 5));
      int m = 1 + static_cast<int>(random_below(rng, 5));
      std::vector<int> b(n);
      for (int& x : b) x = random_bit(rng);
      CHECK(cnot_grid_expected_output(n, m, b) ==
            testing::classical_cnot_cascade(b, m));
    }
  }
}

SCENARIO("CNOT grid patterns compute the CNOT cascade", "[pattern]") {
  // dense branch enumeration, independent of compiler and simulator
  for (auto [n, m] : {std::pair{2, 1}, {2, 2}, {3, 1}}) {
    for (int bits = 0; bits < (1 << n); ++bits) {
      std::vector<int> b(n);
      for (int i = 0; i < n; ++i) b[i] = (bits >> i) & 1;
      MeasurementPattern p = cnot_grid_pattern(n, m, b);
      CHECK(testing::deterministic_output(p, std::vector<int>(n, 0)) ==
            testing::classical_cnot_cascade(b, m));
    }
  }
}

SCENARIO("Patterns round-trip through JSON", "[pattern]") {
  for (const MeasurementPattern& p :
       {grover_pattern(2), cnot_grid_pattern(3, 2, {1, 1, 0})}) {
    std::string text = pattern_to_json(p);
    MeasurementPattern q = pattern_from_json(text);
    CHECK(q.angles() == p.angles());
    CHECK(q.flow() == p.flow());
    CHECK(pattern_to_json(q) == text);
  }
  CHECK_THROWS_AS(pattern_from_json(R"({"vertices": [1, 2]})"),
                  std::invalid_argument);
}

SCENARIO("Patterns reject inconsistent data", "[pattern]") {
  OpenGraph path({1, 2, 3}, {{1, 2}, {2, 3}}, {1}, {3}, {1, 2});
  Colouring ok{{{1, 3}, {2}}};
  CHECK_THROWS_AS(
      MeasurementPattern(path, {{1, 2}, {2, 3}}, {{1, Angle::zero()}}, ok),
      std::invalid_argument);
  CHECK_THROWS_AS(
      MeasurementPattern(path, {{1, 3}, {2, 3}},
                         {{1, Angle::zero()}, {2, Angle::zero()}}, ok),
      std::invalid_argument);
  CHECK_THROWS_AS(
      MeasurementPattern(path, {{1, 2}, {2, 3}},
                         {{1, Angle::zero()}, {2, Angle::zero()}},
                         {{{1, 2, 3}}}),
      std::invalid_argument);
}

}  // namespace test_pattern
}  // namespace vbqc
