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
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vbqc/pattern.hpp"
#include "vbqc/rng.hpp"

namespace vbqc {

using Complex = std::complex<double>;

/**
 * Dense state over the currently allocated qubit slots. Slots are physical
 * qubit labels; allocating appends a |0> qubit and freeing removes a qubit
 * that has been reset to |0>.
 *
 * Amplitude index bit k belongs to the k-th live qubit (see slots()).
 */
class StateVector {
 public:
  StateVector() : amps_{Complex(1.0)} {}

  void alloc(int slot);
  /** Throws std::logic_error unless the qubit is in |0> (1e-10). */
  void free(int slot);
  bool allocated(int slot) const;
  std::size_t qubit_count() const { return slots_.size(); }
  const std::vector<int>& slots() const { return slots_; }
  const std::vector<Complex>& amplitudes() const { return amps_; }

  void apply(int slot, const Eigen::Matrix2cd& u);
  /** u acts on |a b> with `a` the more significant factor. */
  void apply(int slot_a, int slot_b, const Eigen::Matrix4cd& u);
  /** Same as apply() but without unitarity assumptions (Kraus operators). */
  std::vector<Complex> applied(
      std::span<const int> slots, const Eigen::MatrixXcd& op) const;

  double probability_one(int slot) const;
  /** Projects onto computational value `bit` and renormalises. */
  void collapse(int slot, int bit);

  double norm() const;
  void normalise();
  void set_amplitudes(std::vector<Complex> amps);

  /** <P> for a Pauli string given as (slot, 'I'|'X'|'Y'|'Z') pairs. */
  double expectation(std::span<const std::pair<int, char>> pauli) const;

  /** Human-readable amplitudes; at most 10 qubits. */
  std::string dump() const;

 private:
  int index_of(int slot) const;

  std::vector<int> slots_;
  std::vector<Complex> amps_;
};

/** A CPTP map on one or two qubits in Kraus form. */
class KrausChannel {
 public:
  /** Throws std::invalid_argument unless sum K^dag K = I within 1e-8. */
  explicit KrausChannel(std::vector<Eigen::MatrixXcd> ops);

  int qubits() const { return qubits_; }
  const std::vector<Eigen::MatrixXcd>& operators() const { return ops_; }

  static KrausChannel identity(int qubits = 1);
  /** rho -> (1-p) rho + p I/d on `qubits` qubits. */
  static KrausChannel depolarizing(double p, int qubits = 1);
  /** Off-diagonal elements scaled by (1-p): Kraus sqrt(1-p/2) I, sqrt(p/2) Z. */
  static KrausChannel dephasing(double p);
  /** rho -> (1-p) rho + p X rho X. */
  static KrausChannel bit_flip(double p);
  static KrausChannel unitary(const Eigen::MatrixXcd& u);

 private:
  std::vector<Eigen::MatrixXcd> ops_;
  int qubits_ = 1;
};

/**
 * Noise attached to operation classes.
 *
 * `preparation` acts after every |theta> or |+-> preparation. If
 * `preparation_by_theta[j]` is set it replaces `preparation` for |j*pi/4>,
 * which makes the preparation noise secret-dependent.
 * `single_qubit` acts after preparations, native one-qubit gates and the
 * basis change that precedes every measurement; `two_qubit` after XX and ZZ.
 * A measured bit is flipped with probability `measurement_flip`.
 */
struct NoiseModel {
  std::optional<KrausChannel> preparation;
  std::array<std::optional<KrausChannel>, 8> preparation_by_theta;
  std::optional<KrausChannel> single_qubit;
  std::optional<KrausChannel> two_qubit;
  double measurement_flip = 0.0;

  /** Throws std::invalid_argument on wrong arities or a bad probability. */
  void validate() const;
  bool noiseless() const;
  bool secret_dependent() const;
};

/**
 * Parses `key=value` pairs separated by commas: depol1, depol2, measflip,
 * prepdepol, prepdeph take probabilities; prepdep names a JSON file of
 * per-theta Kraus sets, read through `read_file`. An empty spec or "none"
 * is the noiseless model.
 */
NoiseModel parse_noise_spec(
    std::string_view spec,
    const std::function<std::string(const std::string&)>& read_file = {});

/**
 * {"channels": [c_0, ..., c_7]} where c_j is the list of 2x2 Kraus
 * operators for |j*pi/4>, each written as [[[re,im],[re,im]],[[re,im],[re,im]]].
 */
std::array<std::optional<KrausChannel>, 8> parse_prep_channels_json(
    std::string_view text);

Eigen::Matrix2cd rx(double theta);
Eigen::Matrix2cd rz_matrix(double theta);
Eigen::Matrix2cd u1q_matrix(double theta, double phi);
Eigen::Matrix4cd zz_matrix(double theta);
/** (H x H) CZ (H x H). */
Eigen::Matrix4cd xx_matrix();

/** |theta> = cos(theta/2)|0> - i sin(theta/2)|1>. */
Eigen::Vector2cd yz_state(double theta);

/**
 * One shot: a state, a noise model and the shot's random engine. Preparation
 * and measurement angles live in the YZ plane.
 */
class Simulator {
 public:
  Simulator(const NoiseModel& noise, Engine engine);

  StateVector& state() { return state_; }
  const StateVector& state() const { return state_; }
  Engine& engine() { return engine_; }

  void alloc(int slot) { state_.alloc(slot); }
  void free(int slot) { state_.free(slot); }

  /** Reset, then Rx(theta); secret-dependent noise is keyed by theta. */
  void prep_theta(int slot, Angle theta);
  /** Raw-radian variant; only the secret-independent channel applies. */
  void prep_theta(int slot, double theta);
  /** Z^d |+>. */
  void prep_dummy(int slot, int d);

  void apply_xx(int slot_u, int slot_v);

  /**
   * Projective measurement {|delta><delta|, |delta+pi><delta+pi|}; returns 0
   * for |delta>. The slot is left reset to |0> so it can be freed.
   */
  int measure_angle(int slot, double delta);
  int measure_angle(int slot, Angle delta) {
    return measure_angle(slot, delta.radians());
  }

  // native gate set
  void u1q(int slot, double theta, double phi);
  void zz(int slot_a, int slot_b, double theta);
  void rz(int slot, double theta);

  /** Samples one Kraus branch with probability ||K_i psi||^2. */
  void apply_channel(std::span<const int> slots, const KrausChannel& ch);

  /** Prepares |+> on a free scratch slot and measures it in Z. */
  int sample_random_bit(int scratch_slot);

 private:
  void reset(int slot);
  void after_preparation(int slot, const KrausChannel* prep_channel);

  const NoiseModel& noise_;
  Engine engine_;
  StateVector state_;
};

}  // namespace vbqc
