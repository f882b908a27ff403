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

#include "vbqc/secretdep.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <numbers>
#include <sstream>

namespace vbqc {

namespace {

using Eigen::Matrix2cd;
using Eigen::Matrix4cd;

constexpr double kSmoothing = 1e-9;

const std::array<Matrix2cd, 4>& paulis() {
  static const std::array<Matrix2cd, 4> p = [] {
    const Complex i(0.0, 1.0);
    std::array<Matrix2cd, 4> out;
    out[0] << 1, 0, 0, 1;
    out[1] << 0, 1, 1, 0;
    out[2] << 0, -i, i, 0;
    out[3] << 1, 0, 0, -1;
    return out;
  }();
  return p;
}

Matrix2cd hermitian_part(const Matrix2cd& m) {
  return (m + m.adjoint()) / 2.0;
}

Matrix2cd apply_raw(const Matrix4cd& lam, const Matrix2cd& rho) {
  Matrix2cd out = Matrix2cd::Zero();
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      out += rho(x, y) * lam.block<2, 2>(2 * x, 2 * y);
  return out;
}

Matrix2cd partial_trace_b(const Matrix4cd& m) {
  Matrix2cd out;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) out(x, y) = m.block<2, 2>(2 * x, 2 * y).trace();
  return out;
}

Matrix4cd project_tp(const Matrix4cd& m) {
  const Matrix2cd excess = partial_trace_b(m) - Matrix2cd::Identity();
  Matrix4cd out = m;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      out.block<2, 2>(2 * x, 2 * y) -= excess(x, y) * Matrix2cd::Identity() / 2.0;
  return out;
}

Matrix4cd project_psd(const Matrix4cd& m) {
  Eigen::SelfAdjointEigenSolver<Matrix4cd> es((m + m.adjoint()) / 2.0);
  Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

std::array<Matrix2cd, 8> ideal_states() {
  std::array<Matrix2cd, 8> out;
  for (int j = 0; j < 8; ++j)
    out[j] = DensityMatrix::yz(j * std::numbers::pi / 4).matrix();
  return out;
}

struct Objective {
  std::array<Matrix2cd, 8> inputs;
  std::array<Matrix2cd, 8> targets;

  explicit Objective(const StateSet& states) : inputs(ideal_states()) {
    for (int j = 0; j < 8; ++j) targets[j] = states[j].matrix();
  }

  double value(const Matrix4cd& lam) const {
    double f = 0.0;
    for (int j = 0; j < 8; ++j) {
      const double r = (apply_raw(lam, inputs[j]) - targets[j]).squaredNorm();
      f += std::sqrt(r + kSmoothing);
    }
    return f / 8.0;
  }

  Matrix4cd gradient(const Matrix4cd& lam) const {
    Matrix4cd g = Matrix4cd::Zero();
    for (int j = 0; j < 8; ++j) {
      const Matrix2cd delta = apply_raw(lam, inputs[j]) - targets[j];
      const double scale = 1.0 / std::sqrt(delta.squaredNorm() + kSmoothing);
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          g.block<2, 2>(2 * x, 2 * y) += scale * inputs[j](y, x) * delta;
    }
    return g / 8.0;
  }
};

double inner(const Matrix4cd& a, const Matrix4cd& b) {
  return (a.adjoint() * b).trace().real();
}

struct StartResult {
  Matrix4cd lam;
  double value;
  int iterations;
  bool converged;
};

// Accelerated projected gradient (FISTA) with backtracking and adaptive
// restart.
StartResult minimise(
    const Objective& obj, const Matrix4cd& start, const FitOptions& opt) {
  Matrix4cd x = project_cptp(start).matrix();
  Matrix4cd y = x;
  double fx = obj.value(x);
  double t = 1.0;
  double lip = 1.0;
  int quiet = 0;
  for (int k = 1; k <= opt.max_iterations; ++k) {
    const double fy = obj.value(y);
    const Matrix4cd g = obj.gradient(y);
    Matrix4cd z;
    double fz;
    for (;;) {
      z = project_cptp(y - g / lip).matrix();
      const Matrix4cd step = z - y;
      fz = obj.value(z);
      if (fz <= fy + inner(g, step) + lip / 2 * step.squaredNorm() + 1e-15)
        break;
      lip *= 2.0;
    }
    if (fz > fx) {
      // A plain gradient step from x that cannot descend means x is optimal
      // up to projection accuracy; otherwise momentum overshot, so restart.
      if (t == 1.0) return {x, fx, k, true};
      y = x;
      t = 1.0;
      continue;
    }
    const double change = fx - fz;
    const double tn = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    y = z + ((t - 1.0) / tn) * (z - x);
    x = z;
    t = tn;
    fx = fz;
    lip *= 0.95;
    quiet = change <= opt.tolerance * std::max(1e-3, fx) ? quiet + 1 : 0;
    if (quiet >= 50) return {x, fx, k, true};
  }
  return {x, fx, opt.max_iterations, false};
}

// Box-Muller on the portable uniform draw.
double normal(Engine& rng) {
  const double u1 = 1.0 - random_unit(rng);
  const double u2 = random_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2 * std::numbers::pi * u2);
}

nlohmann::json complex_matrix_json(const Eigen::MatrixXcd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

DensityMatrix::DensityMatrix(const Eigen::Matrix2cd& rho) : rho_(rho) {
  if ((rho - rho.adjoint()).norm() > 1e-8)
    throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > 1e-8)
    throw std::invalid_argument("density matrix trace is not 1");
  rho_ = hermitian_part(rho);
}

DensityMatrix DensityMatrix::from_bloch(double rx, double ry, double rz) {
  const auto& p = paulis();
  return DensityMatrix((p[0] + rx * p[1] + ry * p[2] + rz * p[3]) / 2.0);
}

DensityMatrix DensityMatrix::pure(const Eigen::Vector2cd& psi) {
  const Eigen::Vector2cd u = psi.normalized();
  return DensityMatrix(u * u.adjoint());
}

DensityMatrix DensityMatrix::yz(double theta) { return pure(yz_state(theta)); }

double DensityMatrix::min_eigenvalue() const {
  return Eigen::SelfAdjointEigenSolver<Matrix2cd>(rho_).eigenvalues()(0);
}

DensityMatrix DensityMatrix::clipped() const {
  Eigen::SelfAdjointEigenSolver<Matrix2cd> es(rho_);
  Eigen::Vector2d ev = es.eigenvalues().cwiseMax(0.0);
  ev /= ev.sum();
  return DensityMatrix(
      es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint());
}

long TomographyData::shots() const {
  const long n = counts[0][0].total();
  for (const auto& per_theta : counts)
    for (const auto& c : per_theta)
      if (c.total() != n)
        throw std::invalid_argument("bases have different shot counts");
  return n;
}

TomographyData parse_tomography_csv(std::string_view text) {
  TomographyData data;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != "theta_index,basis,outcome,count")
        throw std::invalid_argument(
            "expected header theta_index,basis,outcome,count");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    auto bad = [&](const std::string& why) {
      return std::invalid_argument(
          "tomography CSV line " + std::to_string(lineno) + ": " + why);
    };
    if (f.size() != 4) throw bad("expected 4 columns");
    int j;
    long count;
    try {
      j = std::stoi(f[0]);
      count = std::stol(f[3]);
    } catch (const std::logic_error&) {
      throw bad("non-numeric field");
    }
    if (j < 0 || j > 7) throw bad("theta_index must be 0..7");
    if (count < 0) throw bad("negative count");
    static const std::string kBases = "XYZ";
    if (f[1].size() != 1 || kBases.find(f[1][0]) == std::string::npos)
      throw bad("basis must be X, Y or Z");
    BasisCounts& c = data.counts[j][kBases.find(f[1][0])];
    if (f[2] == "+" || f[2] == "0") {
      c.plus += count;
    } else if (f[2] == "-" || f[2] == "1") {
      c.minus += count;
    } else {
      throw bad("outcome must be + or -");
    }
  }
  if (!header) throw std::invalid_argument("empty tomography CSV");
  return data;
}

TomographyData counts_from_states(const StateSet& states, long shots) {
  TomographyData data;
  for (int j = 0; j < 8; ++j)
    for (int b = 0; b < 3; ++b) {
      const double expect =
          (states[j].matrix() * paulis()[b + 1]).trace().real();
      const long plus = std::lround((1.0 + expect) / 2.0 * shots);
      data.counts[j][b] = {plus, shots - plus};
    }
  return data;
}

Eigen::Matrix2cd linear_estimate(const std::array<BasisCounts, 3>& counts) {
  Matrix2cd rho = paulis()[0];
  for (int b = 0; b < 3; ++b) {
    const long n = counts[b].total();
    if (n <= 0)
      throw std::invalid_argument("tomography basis without shots");
    rho += (static_cast<double>(counts[b].plus - counts[b].minus) / n) *
           paulis()[b + 1];
  }
  return rho / 2.0;
}

DensityMatrix reconstruct_state(const std::array<BasisCounts, 3>& counts) {
  return DensityMatrix(linear_estimate(counts)).clipped();
}

double fidelity(const DensityMatrix& rho, double theta) {
  const Eigen::Vector2cd psi = yz_state(theta);
  return (psi.adjoint() * rho.matrix() * psi)(0, 0).real();
}

ChoiMatrix::ChoiMatrix(const Eigen::Matrix4cd& m) : m_(m) {
  if ((m - m.adjoint()).norm() > 1e-8)
    throw std::invalid_argument("Choi matrix is not Hermitian");
  m_ = (m + m.adjoint()) / 2.0;
}

ChoiMatrix ChoiMatrix::from_parameters(const std::array<double, 16>& x) {
  Matrix4cd m = Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i) m(i, i) = x[i];
  int k = 0;
  for (int r = 0; r < 4; ++r)
    for (int c = r + 1; c < 4; ++c, ++k) {
      m(r, c) = Complex(x[4 + k], x[10 + k]);
      m(c, r) = std::conj(m(r, c));
    }
  return ChoiMatrix(m);
}

std::array<double, 16> ChoiMatrix::parameters() const {
  std::array<double, 16> x{};
  for (int i = 0; i < 4; ++i) x[i] = m_(i, i).real();
  int k = 0;
  for (int r = 0; r < 4; ++r)
    for (int c = r + 1; c < 4; ++c, ++k) {
      x[4 + k] = m_(r, c).real();
      x[10 + k] = m_(r, c).imag();
    }
  return x;
}

ChoiMatrix ChoiMatrix::identity() {
  return from_kraus(std::vector<Eigen::MatrixXcd>{Matrix2cd::Identity()});
}

ChoiMatrix ChoiMatrix::from_kraus(const std::vector<Eigen::MatrixXcd>& ops) {
  Matrix4cd m = Matrix4cd::Zero();
  for (const auto& k : ops) {
    if (k.rows() != 2 || k.cols() != 2)
      throw std::invalid_argument("single-qubit Kraus operators expected");
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        m.block<2, 2>(2 * i, 2 * j) += k.col(i) * k.col(j).adjoint();
  }
  return ChoiMatrix(m);
}

Eigen::Matrix2cd ChoiMatrix::partial_trace_output() const {
  return partial_trace_b(m_);
}

double ChoiMatrix::tp_residual() const {
  return (partial_trace_b(m_) - Matrix2cd::Identity()).norm();
}

double ChoiMatrix::min_eigenvalue() const {
  return Eigen::SelfAdjointEigenSolver<Matrix4cd>(m_).eigenvalues()(0);
}

Eigen::Matrix2cd choi_apply(const ChoiMatrix& lam, const Eigen::Matrix2cd& rho) {
  return apply_raw(lam.matrix(), rho);
}

DensityMatrix choi_apply(const ChoiMatrix& lam, const DensityMatrix& rho) {
  if (lam.tp_residual() > 1e-6)
    throw std::invalid_argument("Choi matrix is not trace preserving");
  return DensityMatrix(apply_raw(lam.matrix(), rho.matrix()));
}

PauliTransferMatrix to_ptm(const ChoiMatrix& lam) {
  PauliTransferMatrix r;
  const auto& p = paulis();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      r(i, j) = (p[i] * apply_raw(lam.matrix(), p[j])).trace().real() / 2.0;
  return r;
}

double schatten_one_norm(const Eigen::Matrix2cd& m) {
  return Eigen::SelfAdjointEigenSolver<Matrix2cd>(hermitian_part(m))
      .eigenvalues()
      .cwiseAbs()
      .sum();
}

double frobenius_gap(const ChoiMatrix& lam, const StateSet& states) {
  const auto ideal = ideal_states();
  double sum = 0.0;
  for (int j = 0; j < 8; ++j)
    sum += (apply_raw(lam.matrix(), ideal[j]) - states[j].matrix()).norm();
  return sum / 8.0;
}

double trace_norm_gap(const ChoiMatrix& lam, const StateSet& states) {
  const auto ideal = ideal_states();
  double sum = 0.0;
  for (int j = 0; j < 8; ++j)
    sum += schatten_one_norm(
               apply_raw(lam.matrix(), ideal[j]) - states[j].matrix()) /
           2.0;
  return sum / 8.0;
}

ChoiMatrix project_cptp(const Eigen::Matrix4cd& m) {
  // Dykstra's alternating projections; the correction term for the affine
  // set is zero, so only the cone needs one.
  Matrix4cd x = (m + m.adjoint()) / 2.0;
  Matrix4cd q = Matrix4cd::Zero();
  for (int it = 0; it < 10000; ++it) {
    const Matrix4cd y = project_tp(x);
    const Matrix4cd next = project_psd(y + q);
    q = y + q - next;
    const double moved = (next - x).norm();
    x = next;
    if (moved < 1e-14 ||
        (moved < 1e-12 &&
         (partial_trace_b(x) - Matrix2cd::Identity()).norm() < 1e-11))
      break;
  }
  return ChoiMatrix((x + x.adjoint()) / 2.0);
}

ChoiMatrix random_channel(Engine& rng, int kraus) {
  if (kraus < 1 || kraus > 4)
    throw std::invalid_argument("a qubit channel has 1 to 4 Kraus operators");
  Eigen::MatrixXcd a(2 * kraus, 2);
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < 2; ++c) a(r, c) = Complex(normal(rng), normal(rng));
  Eigen::SelfAdjointEigenSolver<Matrix2cd> es(a.adjoint() * a);
  const Matrix2cd inv_sqrt = es.eigenvectors() *
                             es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                             es.eigenvectors().adjoint();
  const Eigen::MatrixXcd v = a * inv_sqrt;
  std::vector<Eigen::MatrixXcd> ops;
  for (int i = 0; i < kraus; ++i) ops.push_back(v.block(2 * i, 0, 2, 2));
  return ChoiMatrix::from_kraus(ops);
}

FitResult fit_secret_independent_channel(
    const StateSet& states, const FitOptions& options) {
  if (options.starts < 0 || options.max_iterations < 1)
    throw std::invalid_argument("invalid fit options");
  const Objective obj(states);
  Engine rng(options.seed);
  std::vector<Matrix4cd> starts{ChoiMatrix::identity().matrix()};
  for (int s = 0; s < options.starts; ++s)
    starts.push_back(random_channel(rng).matrix());

  FitResult best;
  best.eps_f = std::numeric_limits<double>::infinity();
  bool all_converged = true;
  for (const Matrix4cd& start : starts) {
    const StartResult r = minimise(obj, start, options);
    const ChoiMatrix lam(r.lam);
    const double eps = frobenius_gap(lam, states);
    best.start_objectives.push_back(eps);
    all_converged &= r.converged;
    if (eps < best.eps_f) {
      best.lam = lam;
      best.eps_f = eps;
      best.iterations = r.iterations;
    }
  }
  if (!all_converged)
    throw FitError("channel fit did not converge within the iteration budget",
                   best);
  const auto [lo, hi] = std::minmax_element(
      best.start_objectives.begin(), best.start_objectives.end());
  if (*hi - *lo > options.agreement)
    throw FitError("channel fit starts disagree by " + std::to_string(*hi - *lo),
                   best);
  return best;
}

std::array<InfidelityStats, 8> bootstrap_infidelity(
    const TomographyData& data, Engine& rng, long chunk, int resamples) {
  if (chunk < 1 || resamples < 1)
    throw std::invalid_argument("bootstrap needs chunk and resamples > 0");
  std::array<InfidelityStats, 8> out;
  for (int j = 0; j < 8; ++j) {
    std::array<double, 3> p_plus;
    for (int b = 0; b < 3; ++b) {
      const BasisCounts& c = data.counts[j][b];
      if (c.total() < chunk)
        throw std::invalid_argument(
            "theta index " + std::to_string(j) + " has fewer than " +
            std::to_string(chunk) + " shots in a basis");
      p_plus[b] = static_cast<double>(c.plus) / c.total();
    }
    const double theta = j * std::numbers::pi / 4;
    const Eigen::Vector2cd psi = yz_state(theta);
    std::vector<double> values;
    values.reserve(resamples);
    for (int k = 0; k < resamples; ++k) {
      std::array<BasisCounts, 3> draw;
      for (int b = 0; b < 3; ++b) {
        long plus = 0;
        for (long s = 0; s < chunk; ++s) plus += random_unit(rng) < p_plus[b];
        draw[b] = {plus, chunk - plus};
      }
      const Matrix2cd rho = linear_estimate(draw);
      values.push_back(1.0 - (psi.adjoint() * rho * psi)(0, 0).real());
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= resamples;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    out[j] = {mean, resamples > 1 ? ss / (resamples - 1) : 0.0};
  }
  return out;
}

StateSet reference_tomography_states() {
  // {rho_00, Re rho_01, Im rho_01}
  static constexpr double kTable[8][3] = {
      {1.0, -0.0047, -0.005},  {0.849, -0.0024, 0.3581},
      {0.5094, 0.0067, 0.4999}, {0.1428, -0.0077, 0.3498},
      {0.0003, -0.01, 0.0144},  {0.1444, 0.0193, -0.351},
      {0.498, -0.001, -0.5},    {0.8566, 0.0136, -0.3503},
  };
  StateSet out;
  for (int j = 0; j < 8; ++j) {
    Matrix2cd m;
    const Complex off(kTable[j][1], kTable[j][2]);
    m << kTable[j][0], off, std::conj(off), 1.0 - kTable[j][0];
    out[j] = DensityMatrix(m);
  }
  return out;
}

double mean_infidelity(const StateSet& states) {
  double sum = 0.0;
  for (int j = 0; j < 8; ++j)
    sum += 1.0 - fidelity(states[j], j * std::numbers::pi / 4);
  return sum / 8.0;
}

std::string fit_to_json(const FitResult& fit, const StateSet& states) {
  using nlohmann::json;
  const PauliTransferMatrix r = to_ptm(fit.lam);
  json ptm = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int j = 0; j < 4; ++j) row.push_back(r(i, j));
    ptm.push_back(row);
  }
  json j;
  j["eps_f"] = fit.eps_f;
  j["eps_1"] = trace_norm_gap(fit.lam, states);
  j["ptm"] = ptm;
  j["choi"] = complex_matrix_json(fit.lam.matrix());
  j["choi_parameters"] = fit.lam.parameters();
  j["choi_min_eigenvalue"] = fit.lam.min_eigenvalue();
  j["tp_residual"] = fit.lam.tp_residual();
  j["start_objectives"] = fit.start_objectives;
  j["iterations"] = fit.iterations;
  j["mean_infidelity"] = mean_infidelity(states);
  return j.dump(2) + "\n";
}

}  // namespace vbqc
