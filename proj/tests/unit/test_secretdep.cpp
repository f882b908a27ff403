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
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "vbqc/secretdep.hpp"

namespace vbqc {
namespace test_secretdep {

using Catch::Matchers::WithinAbs;
using Eigen::Matrix2cd;
using Eigen::Matrix4cd;
constexpr double kPi = std::numbers::pi;

static StateSet ideal_states() {
  StateSet s;
  for (int j = 0; j < 8; ++j) s[j] = DensityMatrix::yz(j * kPi / 4);
  return s;
}

static StateSet through(const KrausChannel& ch) {
  StateSet s;
  for (int j = 0; j < 8; ++j)
    s[j] = DensityMatrix(testing::evolve(
        ch.operators(), DensityMatrix::yz(j * kPi / 4).matrix()));
  return s;
}

static DensityMatrix random_state(Engine& rng) {
  const double u = 2 * random_unit(rng) - 1;
  const double phi = 2 * kPi * random_unit(rng);
  const double len = std::cbrt(random_unit(rng));
  const double s = std::sqrt(1 - u * u);
  return DensityMatrix::from_bloch(
      len * s * std::cos(phi), len * s * std::sin(phi), len * u);
}

SCENARIO("Density matrices", "[secretdep]") {
  Matrix2cd m;
  m << 0.5, 0.1, 0.2, 0.5;
  CHECK_THROWS_AS(DensityMatrix(m), std::invalid_argument);
  m << 0.7, 0, 0, 0.7;
  CHECK_THROWS_AS(DensityMatrix(m), std::invalid_argument);
  CHECK_THAT(DensityMatrix::yz(kPi / 2).matrix()(0, 1).imag(),
             WithinAbs(0.5, 1e-12));
  const DensityMatrix outside = DensityMatrix::from_bloch(1, 1, 0);
  CHECK(outside.min_eigenvalue() < -0.2);
  CHECK(outside.clipped().min_eigenvalue() > -1e-12);
  CHECK_THAT(outside.clipped().matrix().trace().real(), WithinAbs(1, 1e-12));
}

SCENARIO("Reconstructing states from Pauli counts", "[secretdep]") {
  GIVEN("|0> and |pi/2>") {
    const std::array<BasisCounts, 3> zero{{{500, 500}, {500, 500}, {1000, 0}}};
    const DensityMatrix rho = reconstruct_state(zero);
    CHECK_THAT(fidelity(rho, 0.0), WithinAbs(1.0, 1e-12));
    CHECK_THAT(fidelity(rho, kPi), WithinAbs(0.0, 1e-12));
    // <Y> = -1 for |pi/2> = (|0> - i|1>)/sqrt 2
    const std::array<BasisCounts, 3> yminus{{{50, 50}, {0, 100}, {50, 50}}};
    CHECK_THAT(fidelity(reconstruct_state(yminus), kPi / 2),
               WithinAbs(1.0, 1e-12));
  }
  GIVEN("Counts outside the Bloch ball") {
    const std::array<BasisCounts, 3> c{{{100, 0}, {100, 0}, {50, 50}}};
    const Matrix2cd lin = linear_estimate(c);
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix2cd>(lin).eigenvalues()(0) <
          -0.2);
    CHECK(reconstruct_state(c).min_eigenvalue() > -1e-12);
  }
  GIVEN("No shots") {
    const std::array<BasisCounts, 3> none{};
    CHECK_THROWS_AS(reconstruct_state(none), std::invalid_argument);
  }
  GIVEN("Synthetic counts of known states") {
    const StateSet states = reference_tomography_states();
    const TomographyData data = counts_from_states(states, 1000000);
    CHECK(data.shots() == 1000000);
    for (int j = 0; j < 8; ++j) {
      const DensityMatrix rho = reconstruct_state(data.counts[j]);
      CHECK((rho.matrix() - states[j].matrix()).norm() < 2e-3);
    }
  }
}

SCENARIO("Applying Choi matrices", "[secretdep]") {
  Engine rng(1);
  GIVEN("The identity channel") {
    const ChoiMatrix id = ChoiMatrix::identity();
    CHECK_THAT(id.matrix()(0, 3).real(), WithinAbs(1.0, 1e-15));
    CHECK(id.tp_residual() < 1e-15);
    for (int k = 0; k < 20; ++k) {
      const DensityMatrix rho = random_state(rng);
      CHECK((choi_apply(id, rho).matrix() - rho.matrix()).norm() < 1e-12);
    }
  }
  GIVEN("I/2 on both factors") {
    const ChoiMatrix dep(Matrix4cd::Identity() / 2.0);
    for (int k = 0; k < 20; ++k) {
      const DensityMatrix out = choi_apply(dep, random_state(rng));
      CHECK((out.matrix() - Matrix2cd::Identity() / 2.0).norm() < 1e-12);
    }
    CHECK((dep.matrix() -
           ChoiMatrix::from_kraus(KrausChannel::depolarizing(1.0)).matrix())
              .norm() < 1e-12);
  }
  GIVEN("Conjugation by X") {
    Eigen::MatrixXcd x(2, 2);
    x << 0, 1, 1, 0;
    const ChoiMatrix flip = ChoiMatrix::from_kraus({x});
    const DensityMatrix out = choi_apply(flip, DensityMatrix::yz(0.0));
    CHECK_THAT(out.matrix()(1, 1).real(), WithinAbs(1.0, 1e-12));
    const PauliTransferMatrix r = to_ptm(flip);
    CHECK((r - Eigen::Vector4d(1, 1, -1, -1).asDiagonal().toDenseMatrix())
              .norm() < 1e-12);
  }
  GIVEN("Conjugation by Z") {
    Eigen::MatrixXcd z(2, 2);
    z << 1, 0, 0, -1;
    const PauliTransferMatrix r = to_ptm(ChoiMatrix::from_kraus({z}));
    CHECK((r - Eigen::Vector4d(1, -1, -1, 1).asDiagonal().toDenseMatrix())
              .norm() < 1e-12);
  }
  GIVEN("A channel that is not trace preserving") {
    const ChoiMatrix half(Matrix4cd::Identity() / 4.0);
    CHECK(half.tp_residual() > 0.5);
    CHECK_THROWS_AS(choi_apply(half, DensityMatrix()), std::invalid_argument);
    CHECK_THROWS_AS(ChoiMatrix(Matrix4cd::Random()), std::invalid_argument);
  }
  GIVEN("Kraus channels against the 2x2 evolution") {
    for (const auto& ch :
         {KrausChannel::dephasing(0.3), KrausChannel::bit_flip(0.1),
          KrausChannel::depolarizing(0.4)}) {
      const ChoiMatrix lam = ChoiMatrix::from_kraus(ch);
      for (int k = 0; k < 10; ++k) {
        const DensityMatrix rho = random_state(rng);
        CHECK((choi_apply(lam, rho).matrix() -
               testing::evolve(ch.operators(), rho.matrix()))
                  .norm() < 1e-12);
      }
    }
  }
}

SCENARIO("Choi invariants", "[secretdep]") {
  Engine rng(2);
  for (int k = 0; k < 100; ++k) {
    const ChoiMatrix lam = random_channel(rng, 1 + k % 4);
    REQUIRE(lam.tp_residual() < 1e-10);
    REQUIRE(lam.min_eigenvalue() > -1e-10);
    const auto params = lam.parameters();
    REQUIRE((ChoiMatrix::from_parameters(params).matrix() - lam.matrix())
                .norm() < 1e-14);
    const DensityMatrix out = choi_apply(lam, random_state(rng));
    CHECK_THAT(out.matrix().trace().real(), WithinAbs(1.0, 1e-10));
    CHECK(out.min_eigenvalue() > -1e-10);
    CHECK((out.matrix() - out.matrix().adjoint()).norm() < 1e-12);
    const PauliTransferMatrix r = to_ptm(lam);
    CHECK((r.row(0) - Eigen::RowVector4d(1, 0, 0, 0)).norm() < 1e-10);
    // projecting a CPTP map changes nothing
    CHECK((project_cptp(lam.matrix()).matrix() - lam.matrix()).norm() < 1e-8);
  }
  GIVEN("Arbitrary Hermitian matrices") {
    for (int k = 0; k < 50; ++k) {
      Matrix4cd m = Matrix4cd::Random();
      m = (m + m.adjoint()).eval();
      const ChoiMatrix p = project_cptp(m);
      CHECK(p.tp_residual() < 1e-8);
      CHECK(p.min_eigenvalue() > -1e-8);
      // the projection is no farther than any other CPTP point
      const ChoiMatrix other = random_channel(rng);
      CHECK((p.matrix() - m).norm() <= (other.matrix() - m).norm() + 1e-8);
    }
  }
}

SCENARIO("Gaps between a channel and the measured states", "[secretdep]") {
  Matrix2cd d;
  d << -0.5, 0, 0, 0.5;
  CHECK_THAT(schatten_one_norm(d), WithinAbs(1.0, 1e-15));
  const StateSet ideal = ideal_states();
  CHECK_THAT(frobenius_gap(ChoiMatrix::identity(), ideal),
             WithinAbs(0.0, 1e-12));
  CHECK_THAT(trace_norm_gap(ChoiMatrix::identity(), ideal),
             WithinAbs(0.0, 1e-12));
  StateSet mixed;
  CHECK_THAT(trace_norm_gap(ChoiMatrix::identity(), mixed),
             WithinAbs(0.5, 1e-12));
  CHECK_THAT(frobenius_gap(ChoiMatrix::identity(), mixed),
             WithinAbs(std::sqrt(0.5), 1e-12));

  GIVEN("Convexity of the objective") {
    Engine rng(3);
    const StateSet fixture = reference_tomography_states();
    for (int k = 0; k < 200; ++k) {
      const ChoiMatrix a = random_channel(rng), b = random_channel(rng);
      const double s = random_unit(rng);
      const ChoiMatrix mid((s * a.matrix() + (1 - s) * b.matrix()).eval());
      CHECK(frobenius_gap(mid, fixture) <=
            s * frobenius_gap(a, fixture) +
                (1 - s) * frobenius_gap(b, fixture) + 1e-12);
    }
  }
}

SCENARIO("Fitting a secret-independent channel", "[secretdep]") {
  GIVEN("Perfect states") {
    const FitResult fit = fit_secret_independent_channel(ideal_states());
    CHECK(fit.eps_f < 1e-4);
    CHECK(fit.start_objectives.size() == 7);
  }
  GIVEN("The reference estimates") {
    const StateSet fixture = reference_tomography_states();
    CHECK_THAT(mean_infidelity(fixture), WithinAbs(1.23108e-4, 1e-9));
    const FitResult fit = fit_secret_independent_channel(fixture);
    // values of an independent convex solver, frozen
    CHECK_THAT(fit.eps_f, WithinAbs(0.0150244, 1e-5));
    CHECK_THAT(trace_norm_gap(fit.lam, fixture), WithinAbs(0.0106239, 1e-5));
    Eigen::Matrix4d expect;
    expect << 1, 0, 0, 0,                       //
        -0.0017, 0.99796, 0.00626, 0.00245,     //
        -0.00082, -0.00718, 0.99834, 0.00324,   //
        -0.00038, -0.00348, -0.00233, 0.99893;  //
    CHECK((to_ptm(fit.lam) - expect).cwiseAbs().maxCoeff() < 1e-3);
    CHECK(fit.lam.tp_residual() < 1e-8);
    CHECK(fit.lam.min_eigenvalue() > -1e-8);

    // no CPTP map does better
    Engine rng(4);
    CHECK(fit.eps_f <= frobenius_gap(ChoiMatrix::identity(), fixture));
    for (int k = 0; k < 500; ++k)
      CHECK(fit.eps_f <= frobenius_gap(random_channel(rng), fixture) + 1e-9);

    const std::string json = fit_to_json(fit, fixture);
    CHECK(json.find("\"eps_f\"") != std::string::npos);
    CHECK(json.find("\"ptm\"") != std::string::npos);
  }
  GIVEN("States through a dephasing channel") {
    const KrausChannel ch = KrausChannel::dephasing(0.2);
    const FitResult fit = fit_secret_independent_channel(through(ch));
    CHECK(fit.eps_f < 1e-4);
    // only the I, Y and Z inputs are probed by YZ-plane states
    const PauliTransferMatrix got = to_ptm(fit.lam);
    const PauliTransferMatrix want = to_ptm(ChoiMatrix::from_kraus(ch));
    for (int col : {0, 2, 3})
      CHECK((got.col(col) - want.col(col)).norm() < 1e-2);
  }
  GIVEN("A tiny iteration budget") {
    FitOptions opt;
    opt.max_iterations = 2;
    try {
      fit_secret_independent_channel(reference_tomography_states(), opt);
      FAIL("expected FitError");
    } catch (const FitError& e) {
      CHECK(e.best().eps_f > 0.0);
      CHECK(e.best().lam.tp_residual() < 1e-8);
    }
  }
  GIVEN("An impossible agreement") {
    FitOptions opt;
    opt.agreement = -1.0;
    CHECK_THROWS_AS(
        fit_secret_independent_channel(reference_tomography_states(), opt),
        FitError);
  }
}

SCENARIO("Bootstrapped infidelities", "[secretdep]") {
  Engine rng(5);
  GIVEN("Noiseless counts") {
    // the linear estimate is unbiased, so the mean infidelity is zero up to
    // shot noise and may be negative
    const auto stats = bootstrap_infidelity(
        counts_from_states(ideal_states(), 100000), rng, 1000, 400);
    for (const auto& s : stats) {
      CHECK_THAT(s.mean, WithinAbs(0.0, 5 * std::sqrt(s.variance / 400) + 1e-12));
      CHECK(s.variance < 1e-3);
    }
  }
  GIVEN("Counts with no spread in any basis") {
    TomographyData data;
    for (auto& c : data.counts) c = {{{100, 0}, {100, 0}, {100, 0}}};
    const auto stats = bootstrap_infidelity(data, rng, 100, 20);
    for (const auto& s : stats) CHECK_THAT(s.variance, WithinAbs(0.0, 1e-20));
  }
  GIVEN("States rotated by eps") {
    const double eps = 0.2;
    StateSet rotated;
    for (int j = 0; j < 8; ++j)
      rotated[j] = DensityMatrix::yz(j * kPi / 4 + eps);
    const auto stats = bootstrap_infidelity(
        counts_from_states(rotated, 100000), rng, 1000, 400);
    const double expect = std::pow(std::sin(eps / 2), 2);
    for (const auto& s : stats) {
      CHECK_THAT(s.mean, WithinAbs(expect, 5 * std::sqrt(s.variance / 400)));
      CHECK(s.variance > 0.0);
    }
  }
  GIVEN("One resample") {
    const auto stats = bootstrap_infidelity(
        counts_from_states(reference_tomography_states(), 5000), rng, 100, 1);
    for (const auto& s : stats) CHECK(s.variance == 0.0);
  }
  GIVEN("Bad arguments") {
    const TomographyData data = counts_from_states(ideal_states(), 100);
    CHECK_THROWS_AS(bootstrap_infidelity(data, rng, 0, 10),
                    std::invalid_argument);
    CHECK_THROWS_AS(bootstrap_infidelity(data, rng, 10, 0),
                    std::invalid_argument);
  }
}

SCENARIO("Tomography CSV", "[secretdep]") {
  GIVEN("A full table") {
    std::string csv = "theta_index,basis,outcome,count\n";
    for (int j = 0; j < 8; ++j)
      for (char b : {'X', 'Y', 'Z'}) {
        csv += std::to_string(j) + ',' + b + ",+,60\n";
        csv += std::to_string(j) + ',' + b + ",-,40\n";
      }
    csv += "3,Z,0,5\n3,Z,1,-5\n";
    CHECK_THROWS_AS(parse_tomography_csv(csv), std::invalid_argument);
    csv.erase(csv.size() - 9);  // drop the negative row
    const TomographyData data = parse_tomography_csv(csv);
    CHECK(data.counts[3][2].plus == 65);
    CHECK(data.counts[0][0].minus == 40);
    CHECK_THROWS_AS(data.shots(), std::invalid_argument);
  }
  GIVEN("Malformed rows") {
    const std::string header = "theta_index,basis,outcome,count\n";
    CHECK_THROWS_AS(parse_tomography_csv("0,X,+,1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_tomography_csv(header + "8,X,+,1\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_tomography_csv(header + "0,W,+,1\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_tomography_csv(header + "0,X,?,1\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_tomography_csv(header + "0,X,+\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_tomography_csv(header + "0,X,+,many\n"),
                    std::invalid_argument);
  }
}

SCENARIO("The built-in estimates match the data file", "[secretdep]") {
  std::ifstream in(VBQC_TEST_DATA_DIR "/reference_states.csv");
  REQUIRE(in);
  std::string line;
  std::getline(in, line);
  const StateSet builtin = reference_tomography_states();
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(row, cell, ',')) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 4);
    const auto& m = builtin[static_cast<int>(v[0])].matrix();
    CHECK(m(0, 0).real() == v[1]);
    CHECK(m(0, 1).real() == v[2]);
    CHECK(m(0, 1).imag() == v[3]);
    ++rows;
  }
  CHECK(rows == 8);
}

}  // namespace test_secretdep
}  // namespace vbqc
