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

#include "vbqc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace vbqc {

namespace {

constexpr double kFreeTolerance = 1e-10;
const Complex kI(0.0, 1.0);

}  // namespace

// ---------------------------------------------------------------------------
// StateVector

int StateVector::index_of(int slot) const {
  auto it = std::find(slots_.begin(), slots_.end(), slot);
  if (it == slots_.end())
    throw std::invalid_argument(
        "qubit slot " + std::to_string(slot) + " is not allocated");
  return static_cast<int>(it - slots_.begin());
}

bool StateVector::allocated(int slot) const {
  return std::find(slots_.begin(), slots_.end(), slot) != slots_.end();
}

void StateVector::alloc(int slot) {
  if (allocated(slot))
    throw std::invalid_argument(
        "qubit slot " + std::to_string(slot) + " is already allocated");
  if (slots_.size() >= 20)
    throw std::length_error("state vector limited to 20 qubits");
  slots_.push_back(slot);
  amps_.resize(amps_.size() * 2, Complex(0.0));
}

void StateVector::free(int slot) {
  const int k = index_of(slot);
  if (probability_one(slot) > kFreeTolerance)
    throw std::logic_error(
        "freeing qubit slot " + std::to_string(slot) + " which is not reset");
  const std::size_t bit = std::size_t{1} << k;
  // keep bits below k, shift bits above k down by one
  std::vector<Complex> compact(amps_.size() / 2);
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & bit) continue;
    std::size_t low = i & (bit - 1);
    std::size_t high = (i >> (k + 1)) << k;
    compact[high | low] = amps_[i];
  }
  amps_ = std::move(compact);
  slots_.erase(slots_.begin() + k);
  normalise();
}

void StateVector::apply(int slot, const Eigen::Matrix2cd& u) {
  const std::size_t bit = std::size_t{1} << index_of(slot);
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & bit) continue;
    const Complex a0 = amps_[i], a1 = amps_[i | bit];
    amps_[i] = u(0, 0) * a0 + u(0, 1) * a1;
    amps_[i | bit] = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

void StateVector::apply(int slot_a, int slot_b, const Eigen::Matrix4cd& u) {
  if (slot_a == slot_b)
    throw std::invalid_argument("two-qubit gate on a single slot");
  const std::size_t ba = std::size_t{1} << index_of(slot_a);
  const std::size_t bb = std::size_t{1} << index_of(slot_b);
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if ((i & ba) || (i & bb)) continue;
    const std::size_t idx[4] = {i, i | bb, i | ba, i | ba | bb};
    Complex in[4], out[4];
    for (int r = 0; r < 4; ++r) in[r] = amps_[idx[r]];
    for (int r = 0; r < 4; ++r) {
      out[r] = 0;
      for (int c = 0; c < 4; ++c) out[r] += u(r, c) * in[c];
    }
    for (int r = 0; r < 4; ++r) amps_[idx[r]] = out[r];
  }
}

std::vector<Complex> StateVector::applied(
    std::span<const int> slots, const Eigen::MatrixXcd& op) const {
  StateVector copy = *this;
  if (slots.size() == 1 && op.rows() == 2 && op.cols() == 2) {
    copy.apply(slots[0], Eigen::Matrix2cd(op));
  } else if (slots.size() == 2 && op.rows() == 4 && op.cols() == 4) {
    copy.apply(slots[0], slots[1], Eigen::Matrix4cd(op));
  } else {
    throw std::invalid_argument("operator arity does not match slots");
  }
  return std::move(copy.amps_);
}

double StateVector::probability_one(int slot) const {
  const std::size_t bit = std::size_t{1} << index_of(slot);
  double p = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i)
    if (i & bit) p += std::norm(amps_[i]);
  return p;
}

void StateVector::collapse(int slot, int value) {
  const std::size_t bit = std::size_t{1} << index_of(slot);
  for (std::size_t i = 0; i < amps_.size(); ++i)
    if (bool(i & bit) != bool(value)) amps_[i] = 0;
  normalise();
}

double StateVector::norm() const {
  double s = 0.0;
  for (const Complex& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

void StateVector::normalise() {
  const double n = norm();
  if (n == 0.0) throw std::logic_error("state collapsed to zero norm");
  for (Complex& a : amps_) a /= n;
}

void StateVector::set_amplitudes(std::vector<Complex> amps) {
  if (amps.size() != amps_.size())
    throw std::invalid_argument("amplitude vector has the wrong size");
  amps_ = std::move(amps);
}

double StateVector::expectation(
    std::span<const std::pair<int, char>> pauli) const {
  StateVector copy = *this;
  for (const auto& [slot, p] : pauli) {
    Eigen::Matrix2cd m;
    switch (p) {
      case 'I': m << 1, 0, 0, 1; break;
      case 'X': m << 0, 1, 1, 0; break;
      case 'Y': m << 0, -kI, kI, 0; break;
      case 'Z': m << 1, 0, 0, -1; break;
      default: throw std::invalid_argument("unknown Pauli letter");
    }
    copy.apply(slot, m);
  }
  Complex e = 0;
  for (std::size_t i = 0; i < amps_.size(); ++i)
    e += std::conj(amps_[i]) * copy.amps_[i];
  return e.real();
}

std::string StateVector::dump() const {
  if (slots_.size() > 10)
    throw std::length_error("dump is limited to 10 qubits");
  std::ostringstream os;
  os << std::fixed << std::setprecision(6);
  os << "slots:";
  for (int s : slots_) os << " q" << s;
  os << '\n';
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (std::abs(amps_[i]) < 1e-12) continue;
    os << '|';
    for (std::size_t k = slots_.size(); k-- > 0;) os << ((i >> k) & 1);
    os << "> " << amps_[i].real() << (amps_[i].imag() < 0 ? " - " : " + ")
       << std::abs(amps_[i].imag()) << "i\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Gates

Eigen::Matrix2cd rx(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Eigen::Matrix2cd m;
  m << c, -kI * s, -kI * s, c;
  return m;
}

Eigen::Matrix2cd rz_matrix(double theta) {
  Eigen::Matrix2cd m;
  m << std::exp(-kI * theta / 2.0), 0, 0, std::exp(kI * theta / 2.0);
  return m;
}

Eigen::Matrix2cd u1q_matrix(double theta, double phi) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Eigen::Matrix2cd m;
  m << c, -kI * s * std::exp(-kI * phi), -kI * s * std::exp(kI * phi), c;
  return m;
}

Eigen::Matrix4cd zz_matrix(double theta) {
  const Complex a = std::exp(-kI * theta / 2.0), b = std::exp(kI * theta / 2.0);
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m.diagonal() << a, b, b, a;
  return m;
}

Eigen::Matrix4cd xx_matrix() {
  // (I + X1 + X2 - X1 X2) / 2
  Eigen::Matrix4cd m;
  m << 1, 1, 1, -1,  //
      1, 1, -1, 1,   //
      1, -1, 1, 1,   //
      -1, 1, 1, 1;
  return m / 2.0;
}

Eigen::Vector2cd yz_state(double theta) {
  return Eigen::Vector2cd(std::cos(theta / 2), -kI * std::sin(theta / 2));
}

// ---------------------------------------------------------------------------
// Simulator

Simulator::Simulator(const NoiseModel& noise, Engine engine)
    : noise_(noise), engine_(std::move(engine)) {
  noise_.validate();
}

void Simulator::reset(int slot) {
  const double p1 = state_.probability_one(slot);
  if (p1 < 1e-15) {
    state_.collapse(slot, 0);
    return;
  }
  const int b = random_unit(engine_) < p1 ? 1 : 0;
  state_.collapse(slot, b);
  if (b) state_.apply(slot, rx(std::numbers::pi));
}

void Simulator::after_preparation(int slot, const KrausChannel* prep_channel) {
  const int slots[1] = {slot};
  if (prep_channel) apply_channel(slots, *prep_channel);
  if (noise_.single_qubit) apply_channel(slots, *noise_.single_qubit);
}

void Simulator::prep_theta(int slot, Angle theta) {
  reset(slot);
  state_.apply(slot, rx(theta.radians()));
  const auto& specific = noise_.preparation_by_theta[theta.steps()];
  const KrausChannel* ch = specific ? &*specific
                           : noise_.preparation ? &*noise_.preparation
                                                : nullptr;
  after_preparation(slot, ch);
}

void Simulator::prep_theta(int slot, double theta) {
  reset(slot);
  state_.apply(slot, rx(theta));
  after_preparation(slot, noise_.preparation ? &*noise_.preparation : nullptr);
}

void Simulator::prep_dummy(int slot, int d) {
  reset(slot);
  Eigen::Matrix2cd h;
  h << 1, 1, 1, -1;
  state_.apply(slot, Eigen::Matrix2cd(h / std::sqrt(2.0)));
  if (d) state_.apply(slot, Eigen::Matrix2cd(Eigen::Vector2cd(1, -1).asDiagonal()));
  after_preparation(slot, noise_.preparation ? &*noise_.preparation : nullptr);
}

void Simulator::apply_xx(int slot_u, int slot_v) {
  state_.apply(slot_u, slot_v, xx_matrix());
  if (noise_.two_qubit) {
    const int slots[2] = {slot_u, slot_v};
    apply_channel(slots, *noise_.two_qubit);
  }
}

int Simulator::measure_angle(int slot, double delta) {
  // <delta|psi> = <0| Rx(-delta) |psi>
  state_.apply(slot, rx(-delta));
  if (noise_.single_qubit) {
    const int slots[1] = {slot};
    apply_channel(slots, *noise_.single_qubit);
  }
  const double p1 = state_.probability_one(slot);
  int b = random_unit(engine_) < p1 ? 1 : 0;
  state_.collapse(slot, b);
  if (b) state_.apply(slot, rx(std::numbers::pi));
  if (noise_.measurement_flip > 0.0 &&
      random_unit(engine_) < noise_.measurement_flip)
    b ^= 1;
  return b;
}

void Simulator::u1q(int slot, double theta, double phi) {
  state_.apply(slot, u1q_matrix(theta, phi));
  if (noise_.single_qubit) {
    const int slots[1] = {slot};
    apply_channel(slots, *noise_.single_qubit);
  }
}

void Simulator::zz(int slot_a, int slot_b, double theta) {
  state_.apply(slot_a, slot_b, zz_matrix(theta));
  if (noise_.two_qubit) {
    const int slots[2] = {slot_a, slot_b};
    apply_channel(slots, *noise_.two_qubit);
  }
}

void Simulator::rz(int slot, double theta) {
  // virtual on the hardware; no gate noise
  state_.apply(slot, rz_matrix(theta));
}

void Simulator::apply_channel(
    std::span<const int> slots, const KrausChannel& ch) {
  if (static_cast<int>(slots.size()) != ch.qubits())
    throw std::invalid_argument("channel arity does not match slots");
  const auto& ops = ch.operators();
  if (ops.size() == 1) {
    state_.set_amplitudes(state_.applied(slots, ops[0]));
    state_.normalise();
    return;
  }
  std::vector<std::vector<Complex>> branches;
  std::vector<double> weights;
  for (const auto& op : ops) {
    branches.push_back(state_.applied(slots, op));
    double p = 0.0;
    for (const Complex& a : branches.back()) p += std::norm(a);
    weights.push_back(p);
  }
  const double u = random_unit(engine_);
  double acc = 0.0;
  std::size_t pick = ops.size();
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    pick = i;  // the last branch with weight absorbs rounding
    acc += weights[i];
    if (u < acc) break;
  }
  state_.set_amplitudes(std::move(branches[pick]));
  state_.normalise();
}

int Simulator::sample_random_bit(int scratch_slot) {
  state_.alloc(scratch_slot);
  prep_dummy(scratch_slot, 0);
  const int b = measure_angle(scratch_slot, 0.0);
  state_.free(scratch_slot);
  return b;
}

}  // namespace vbqc
