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
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vbqc/rng.hpp"
#include "vbqc/simulator.hpp"

namespace vbqc {

/**
 * A single-qubit density matrix. The constructor checks Hermiticity and unit
 * trace; positivity is a query because tomographic estimates may be
 * slightly negative.
 */
class DensityMatrix {
 public:
  DensityMatrix() : DensityMatrix(Eigen::Matrix2cd::Identity() / 2.0) {}
  /** Throws std::invalid_argument unless Hermitian (1e-8) with trace 1. */
  explicit DensityMatrix(const Eigen::Matrix2cd& rho);

  static DensityMatrix from_bloch(double rx, double ry, double rz);
  static DensityMatrix pure(const Eigen::Vector2cd& psi);
  /** |theta><theta| in the YZ plane. */
  static DensityMatrix yz(double theta);

  const Eigen::Matrix2cd& matrix() const { return rho_; }
  double min_eigenvalue() const;
  /** Negative eigenvalues set to zero, then trace renormalised. */
  DensityMatrix clipped() const;

 private:
  Eigen::Matrix2cd rho_;
};

/** Index j stands for theta = j*pi/4. */
using StateSet = std::array<DensityMatrix, 8>;

struct BasisCounts {
  long plus = 0;
  long minus = 0;

  long total() const { return plus + minus; }
};

/** Pauli counts per theta; basis 0, 1, 2 is X, Y, Z. */
struct TomographyData {
  std::array<std::array<BasisCounts, 3>, 8> counts;

  /** Throws std::invalid_argument if any basis differs in shot count. */
  long shots() const;
};

/**
 * CSV with header theta_index,basis,outcome,count. basis is X, Y or Z,
 * outcome is + or - (0 and 1 are accepted for + and -). Repeated rows add up.
 */
TomographyData parse_tomography_csv(std::string_view text);

/** Expected counts rounded to integers; useful for synthetic data. */
TomographyData counts_from_states(const StateSet& states, long shots);

/**
 * rho = (I + r_x X + r_y Y + r_z Z)/2 with r = (n+ - n-)/N, clipped to the
 * nearest physical state. Throws std::invalid_argument for zero shots.
 */
DensityMatrix reconstruct_state(const std::array<BasisCounts, 3>& counts);
/** The same estimate without clipping. */
Eigen::Matrix2cd linear_estimate(const std::array<BasisCounts, 3>& counts);

/** <theta|rho|theta>. */
double fidelity(const DensityMatrix& rho, double theta);

/**
 * Choi matrix Lambda = sum_ij |i><j| (x) E(|i><j|), so that tr_B Lambda = I
 * for trace-preserving maps and the identity channel has 2|Phi+><Phi+|.
 */
class ChoiMatrix {
 public:
  ChoiMatrix() : ChoiMatrix(identity()) {}
  /** Throws std::invalid_argument unless Hermitian within 1e-8. */
  explicit ChoiMatrix(const Eigen::Matrix4cd& m);

  /**
   * d1..d4 on the diagonal, then a1..a6 and z1..z6 as real and imaginary
   * parts of the upper triangle in row-major order.
   */
  static ChoiMatrix from_parameters(const std::array<double, 16>& x);
  std::array<double, 16> parameters() const;

  static ChoiMatrix identity();
  static ChoiMatrix from_kraus(const std::vector<Eigen::MatrixXcd>& ops);
  static ChoiMatrix from_kraus(const KrausChannel& ch) {
    return from_kraus(ch.operators());
  }

  const Eigen::Matrix4cd& matrix() const { return m_; }
  /** tr_B Lambda. */
  Eigen::Matrix2cd partial_trace_output() const;
  /** Frobenius norm of tr_B Lambda - I. */
  double tp_residual() const;
  double min_eigenvalue() const;

 private:
  Eigen::Matrix4cd m_;
};

/** Lambda(rho) = tr_A[(rho^T (x) I) Lambda] for any 2x2 operator. */
Eigen::Matrix2cd choi_apply(const ChoiMatrix& lam, const Eigen::Matrix2cd& rho);
/** Throws std::invalid_argument unless lam is trace preserving (1e-6). */
DensityMatrix choi_apply(const ChoiMatrix& lam, const DensityMatrix& rho);

/** R_ij = tr(s_i Lambda(s_j))/2 over (I, X, Y, Z). */
using PauliTransferMatrix = Eigen::Matrix4d;
PauliTransferMatrix to_ptm(const ChoiMatrix& lam);

/** Sum of absolute eigenvalues of a Hermitian matrix. */
double schatten_one_norm(const Eigen::Matrix2cd& m);

/** (1/8) sum_theta ||Lambda(|theta><theta|) - rho_theta||_F. */
double frobenius_gap(const ChoiMatrix& lam, const StateSet& states);

/**
 * (1/8) sum_theta of the trace distance (1/2)||Lambda(|theta><theta|) -
 * rho_theta||_1.
 */
double trace_norm_gap(const ChoiMatrix& lam, const StateSet& states);

struct FitOptions {
  int starts = 6;  // random feasible starts, plus the identity channel
  int max_iterations = 20000;
  double tolerance = 1e-11;  // on the relative objective change
  double agreement = 1e-3;
  std::uint64_t seed = 0x5eed;
};

struct FitResult {
  ChoiMatrix lam;
  double eps_f = 0.0;
  std::vector<double> start_objectives;
  int iterations = 0;  // of the best start
};

class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, FitResult best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const FitResult& best() const { return best_; }

 private:
  FitResult best_;
};

/**
 * Best secret-independent channel: minimises frobenius_gap over CPTP Choi
 * matrices by accelerated projected gradient on the smoothed objective,
 * with Dykstra projections onto {tr_B Lambda = I} and the PSD cone.
 *
 * Several starts are run; throws FitError (carrying the best iterate) if a
 * start exhausts its budget or the starts disagree by more than
 * options.agreement.
 */
FitResult fit_secret_independent_channel(
    const StateSet& states, const FitOptions& options = {});

/** Nearest CPTP Choi matrix in Frobenius norm, to 1e-10. */
ChoiMatrix project_cptp(const Eigen::Matrix4cd& m);

/** Random CPTP channel from a Haar-like isometry with `kraus` operators. */
ChoiMatrix random_channel(Engine& rng, int kraus = 4);

struct InfidelityStats {
  double mean = 0.0;
  double variance = 0.0;
};

/**
 * Per theta: draws `resamples` chunks of `chunk` shots per basis from the
 * empirical outcome frequencies, reconstructs the linear (unclipped)
 * estimate and records 1 - <theta|rho|theta>. Variance is the sample
 * variance, zero for a single resample.
 */
std::array<InfidelityStats, 8> bootstrap_infidelity(
    const TomographyData& data, Engine& rng, long chunk = 1000,
    int resamples = 1000);

/** Reference tomography estimates rho_{j pi/4}, rounded to 4 decimals. */
StateSet reference_tomography_states();

/** Mean of 1 - fidelity over the eight states. */
double mean_infidelity(const StateSet& states);

/** {"eps_f", "eps_1", "ptm", "choi", ...} */
std::string fit_to_json(const FitResult& fit, const StateSet& states);

}  // namespace vbqc
