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

#include <cmath>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "vbqc/simulator.hpp"

namespace vbqc {

namespace {

constexpr double kCompletenessTolerance = 1e-8;

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument(
        std::string(what) + " must be a probability in [0,1]");
}

Eigen::MatrixXcd pauli(int which) {
  Eigen::MatrixXcd m(2, 2);
  const Complex i(0.0, 1.0);
  switch (which) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

}  // namespace

KrausChannel::KrausChannel(std::vector<Eigen::MatrixXcd> ops)
    : ops_(std::move(ops)) {
  if (ops_.empty())
    throw std::invalid_argument("Kraus channel needs at least one operator");
  const Eigen::Index dim = ops_.front().rows();
  if (dim == 2) {
    qubits_ = 1;
  } else if (dim == 4) {
    qubits_ = 2;
  } else {
    throw std::invalid_argument("Kraus operators must be 2x2 or 4x4");
  }
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& k : ops_) {
    if (k.rows() != dim || k.cols() != dim)
      throw std::invalid_argument("Kraus operators differ in shape");
    sum += k.adjoint() * k;
  }
  const double err = (sum - Eigen::MatrixXcd::Identity(dim, dim)).norm();
  if (err > kCompletenessTolerance)
    throw std::invalid_argument(
        "Kraus operators are not trace preserving (deviation " +
        std::to_string(err) + ")");
}

KrausChannel KrausChannel::identity(int qubits) {
  const int dim = 1 << qubits;
  return KrausChannel({Eigen::MatrixXcd::Identity(dim, dim)});
}

KrausChannel KrausChannel::depolarizing(double p, int qubits) {
  check_probability(p, "depolarizing strength");
  if (qubits != 1 && qubits != 2)
    throw std::invalid_argument("depolarizing channel on 1 or 2 qubits");
  const int d2 = qubits == 1 ? 4 : 16;
  std::vector<Eigen::MatrixXcd> ops;
  ops.reserve(d2);
  for (int k = 0; k < d2; ++k) {
    Eigen::MatrixXcd pk =
        qubits == 1 ? pauli(k) : kron(pauli(k / 4), pauli(k % 4));
    const double w = k == 0 ? 1.0 - p + p / d2 : p / d2;
    if (w > 0.0) ops.push_back(std::sqrt(w) * pk);
  }
  return KrausChannel(std::move(ops));
}

KrausChannel KrausChannel::dephasing(double p) {
  check_probability(p, "dephasing strength");
  return KrausChannel(
      {std::sqrt(1.0 - p / 2) * pauli(0), std::sqrt(p / 2) * pauli(3)});
}

KrausChannel KrausChannel::bit_flip(double p) {
  check_probability(p, "flip probability");
  return KrausChannel({std::sqrt(1.0 - p) * pauli(0), std::sqrt(p) * pauli(1)});
}

KrausChannel KrausChannel::unitary(const Eigen::MatrixXcd& u) {
  return KrausChannel({u});
}

void NoiseModel::validate() const {
  auto arity = [](const std::optional<KrausChannel>& ch, int n,
                  const char* what) {
    if (ch && ch->qubits() != n)
      throw std::invalid_argument(
          std::string(what) + " channel must act on " + std::to_string(n) +
          " qubit(s)");
  };
  arity(preparation, 1, "preparation");
  for (const auto& ch : preparation_by_theta) arity(ch, 1, "preparation");
  arity(single_qubit, 1, "single-qubit gate");
  arity(two_qubit, 2, "two-qubit gate");
  check_probability(measurement_flip, "measurement flip probability");
}

bool NoiseModel::noiseless() const {
  return !preparation && !secret_dependent() && !single_qubit && !two_qubit &&
         measurement_flip == 0.0;
}

bool NoiseModel::secret_dependent() const {
  for (const auto& ch : preparation_by_theta)
    if (ch) return true;
  return false;
}

std::array<std::optional<KrausChannel>, 8> parse_prep_channels_json(
    std::string_view text) {
  std::array<std::optional<KrausChannel>, 8> out;
  try {
    auto doc = nlohmann::json::parse(text);
    const auto& channels = doc.at("channels");
    if (!channels.is_array() || channels.size() != 8)
      throw std::invalid_argument("`channels` must list 8 Kraus sets");
    for (std::size_t j = 0; j < 8; ++j) {
      if (channels[j].is_null()) continue;
      std::vector<Eigen::MatrixXcd> ops;
      for (const auto& k : channels[j]) {
        Eigen::MatrixXcd m(2, 2);
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c)
            m(r, c) = Complex(k.at(r).at(c).at(0).get<double>(),
                              k.at(r).at(c).at(1).get<double>());
        ops.push_back(m);
      }
      out[j].emplace(std::move(ops));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(
        std::string("malformed preparation channel file: ") + e.what());
  }
  return out;
}

NoiseModel parse_noise_spec(
    std::string_view spec,
    const std::function<std::string(const std::string&)>& read_file) {
  NoiseModel model;
  if (spec.empty() || spec == "none" || spec == "noiseless") return model;
  std::stringstream ss{std::string(spec)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("noise term `" + item + "` is not key=value");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "prepdep") {
      if (!read_file)
        throw std::invalid_argument("prepdep needs a file reader");
      model.preparation_by_theta = parse_prep_channels_json(read_file(value));
      continue;
    }
    double p;
    try {
      std::size_t used = 0;
      p = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::logic_error&) {
      throw std::invalid_argument(
          "noise term `" + key + "` needs a numeric value, got `" + value +
          "`");
    }
    if (key == "depol1") {
      model.single_qubit = KrausChannel::depolarizing(p, 1);
    } else if (key == "depol2") {
      model.two_qubit = KrausChannel::depolarizing(p, 2);
    } else if (key == "measflip") {
      check_probability(p, "measflip");
      model.measurement_flip = p;
    } else if (key == "prepdepol") {
      model.preparation = KrausChannel::depolarizing(p, 1);
    } else if (key == "prepdeph") {
      model.preparation = KrausChannel::dephasing(p);
    } else {
      throw std::invalid_argument("unknown noise term `" + key + "`");
    }
  }
  model.validate();
  return model;
}

}  // namespace vbqc
