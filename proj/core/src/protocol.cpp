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

#include "vbqc/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <json.hpp>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace vbqc {

namespace {

// Substreams of the master seed.
constexpr std::uint64_t kPlanStream = 0;
constexpr std::uint64_t kRoundStream = 1;
constexpr std::uint64_t kRedoStream = 2;
constexpr std::uint64_t kBootstrapStream = 3;

std::string bits_to_string(const std::vector<int>& bits) {
  std::string s;
  for (int b : bits) s += b ? '1' : '0';
  return s;
}

}  // namespace

void ProtocolParams::validate() const {
  if (d < 1) throw std::invalid_argument("need at least one computation round");
  if (t < 1) throw std::invalid_argument("need at least one test round");
  if (w < 0 || w > t)
    throw std::invalid_argument("w must lie in [0, t]");
  if (x.size() != pattern.graph().inputs().size())
    throw std::invalid_argument(
        "input vector has " + std::to_string(x.size()) + " bits, pattern has " +
        std::to_string(pattern.graph().inputs().size()) + " inputs");
  for (int b : x)
    if (b != 0 && b != 1) throw std::invalid_argument("inputs must be bits");
  if (!(p >= 0.0 && p < 0.5))
    throw std::invalid_argument("p must lie in [0, 1/2)");
  if (pattern.colouring().size() == 0)
    throw std::invalid_argument("pattern has no colouring");
}

std::string_view to_string(RoundKind k) {
  return k == RoundKind::kComputation ? "computation" : "test";
}

bool RoundResult::passed() const {
  return std::all_of(trap_passed.begin(), trap_passed.end(),
                     [](const auto& kv) { return kv.second; });
}

RoundSecrets draw_secrets(
    const MeasurementPattern& p, RoundKind kind, Engine& rng) {
  RoundSecrets s;
  s.kind = kind;
  std::set<Vertex> traps;
  if (kind == RoundKind::kTest) {
    s.colour = static_cast<int>(random_below(rng, p.colouring().size()));
    const auto& cls = p.colouring().classes[s.colour];
    traps.insert(cls.begin(), cls.end());
  }
  for (Vertex v : p.graph().vertices()) {
    VertexSecret& vs = s.vertices[v];
    vs.theta = Angle::from_steps(static_cast<int>(random_below(rng, 8)));
    vs.r = random_bit(rng);
    if (kind == RoundKind::kTest) {
      vs.trap = traps.count(v) != 0;
      vs.dummy = !vs.trap;
      if (vs.dummy) vs.d = random_bit(rng);
    }
  }
  return s;
}

std::vector<RoundSecrets> plan_rounds(
    const ProtocolParams& params, Engine& rng) {
  params.validate();
  const int n = params.n();
  std::vector<RoundKind> kinds(n, RoundKind::kComputation);
  std::fill(kinds.begin(), kinds.begin() + params.t, RoundKind::kTest);
  // Fisher-Yates, with our own portable draw
  for (int i = n - 1; i > 0; --i)
    std::swap(kinds[i], kinds[random_below(rng, i + 1)]);
  std::vector<RoundSecrets> plan;
  plan.reserve(n);
  for (RoundKind k : kinds) plan.push_back(draw_secrets(params.pattern, k, rng));
  return plan;
}

RegisterFile load_registers(
    const MeasurementPattern& p, const RoundSecrets& secrets,
    const std::vector<int>& x) {
  const OpenGraph& g = p.graph();
  RegisterFile regs(g.vertices());
  regs.test_round = secrets.kind == RoundKind::kTest;
  regs.colour = secrets.colour;
  for (const auto& [v, s] : secrets.vertices) {
    regs.set_angle_pad(v, s.theta);
    regs.set_bit(v, RegisterFile::kOutcomePad, s.r);
    regs.set_bit(v, RegisterFile::kTrap, s.trap);
    regs.set_bit(v, RegisterFile::kDummy, s.d);
    regs.set_bit(v, RegisterFile::kZCorrection, false);
  }
  for (std::size_t i = 0; i < g.inputs().size(); ++i)
    regs.set_input_bit(g.inputs()[i], x.at(i));
  return regs;
}

Angle compute_delta(
    const MeasurementPattern& p, Vertex v, const RegisterFile& regs) {
  const Angle theta = regs.angle_pad(v);
  if (regs.test_round) {
    if (!regs.bit(v, RegisterFile::kTrap)) return theta;
    return theta + Angle::pi_times(regs.bit(v, RegisterFile::kOutcomePad));
  }

  auto require = [&](Vertex u) {
    if (!regs.written(u, RegisterFile::kOutcome))
      throw std::logic_error(
          "angle of v" + std::to_string(v) + " needs the outcome of v" +
          std::to_string(u) + ", which is not measured yet");
  };
  if (const Vertex* z = p.z_dependency(v)) require(*z);
  for (Vertex u : p.x_dependencies(v)) require(u);

  const OpenGraph& g = p.graph();
  Angle delta = theta;
  if (g.is_input(v)) delta = delta + Angle::pi_times(regs.input_bit(v));
  const Angle phi = p.angle(v);
  delta = delta + (regs.bit(v, RegisterFile::kZCorrection) ? -phi : phi);
  if (!g.is_output(v)) delta = delta + Angle::pi_times(regs.x_correction(v));
  return delta + Angle::pi_times(regs.bit(v, RegisterFile::kOutcomePad));
}

RoundResult execute_round(
    const MeasurementPattern& p, const LazySchedule& schedule,
    const RoundSecrets& secrets, const std::vector<int>& x,
    const NoiseModel& noise, Engine rng) {
  RegisterFile regs = load_registers(p, secrets, x);
  Simulator sim(noise, std::move(rng));
  const bool test = secrets.kind == RoundKind::kTest;

  for (const Instruction& ins : schedule.instructions) {
    switch (ins.op) {
      case OpCode::kAlloc:
        sim.alloc(ins.slot);
        break;
      case OpCode::kPrep:
        if (regs.bit(ins.vertex, RegisterFile::kTrap) || !test)
          sim.prep_theta(ins.slot, regs.angle_pad(ins.vertex));
        else
          sim.prep_dummy(ins.slot, regs.bit(ins.vertex, RegisterFile::kDummy));
        break;
      case OpCode::kEntangle:
        sim.apply_xx(ins.slot, ins.other_slot);
        break;
      case OpCode::kMeasure: {
        const Angle delta = compute_delta(p, ins.vertex, regs);
        regs.record_outcome(ins.vertex, sim.measure_angle(ins.slot, delta));
        break;
      }
      case OpCode::kFree:
        sim.free(ins.slot);
        break;
      case OpCode::kAccumulateZ:
        // test rounds carry no computation, so nothing is corrected
        if (!test) regs.toggle_z(ins.vertex, regs.decoded_outcome(ins.other));
        break;
      case OpCode::kAccumulateX:
        if (!test) regs.toggle_x(ins.vertex, regs.decoded_outcome(ins.other));
        break;
    }
  }

  RoundResult result;
  result.kind = secrets.kind;
  result.colour = secrets.colour;
  const OpenGraph& g = p.graph();
  for (Vertex v : g.vertices())
    result.outcomes[v] = regs.bit(v, RegisterFile::kOutcome);
  if (test) {
    for (Vertex v : g.vertices()) {
      if (!regs.bit(v, RegisterFile::kTrap)) continue;
      int expect = regs.bit(v, RegisterFile::kOutcomePad);
      for (Vertex u : g.neighbours(v))
        expect ^= regs.bit(u, RegisterFile::kDummy);
      result.trap_passed[v] = result.outcomes[v] == expect;
    }
  } else {
    for (Vertex o : g.outputs())
      result.output.push_back(regs.decoded_outcome(o) ^ regs.x_correction(o));
  }
  return result;
}

std::vector<int> reference_output(
    const MeasurementPattern& p, const std::vector<int>& x, Engine rng) {
  RoundSecrets s;
  for (Vertex v : p.graph().vertices()) s.vertices[v];
  const NoiseModel noiseless;
  return execute_round(p, compile(p), s, x, noiseless, std::move(rng)).output;
}

RateEstimate bootstrap_rates(
    const std::vector<bool>& flags, std::size_t sample, std::size_t resamples,
    Engine& rng) {
  if (sample == 0 || resamples == 0)
    throw std::invalid_argument("bootstrap needs sample and resamples > 0");
  if (flags.size() < sample)
    throw std::invalid_argument(
        "bootstrap sample of " + std::to_string(sample) + " needs at least " +
        "that many rounds, got " + std::to_string(flags.size()));
  std::vector<double> means;
  means.reserve(resamples);
  for (std::size_t k = 0; k < resamples; ++k) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < sample; ++i)
      hits += flags[random_below(rng, flags.size())];
    means.push_back(static_cast<double>(hits) / sample);
  }
  RateEstimate est;
  est.mean = std::accumulate(means.begin(), means.end(), 0.0) / resamples;
  if (resamples > 1) {
    double ss = 0.0;
    for (double m : means) ss += (m - est.mean) * (m - est.mean);
    est.std = std::sqrt(ss / (resamples - 1));
  }
  return est;
}

double threshold_bound(int k, double p) {
  if (k < 1) throw std::invalid_argument("colour count must be positive");
  if (!(p >= 0.0 && p < 0.5))
    throw std::invalid_argument("p must lie in [0, 1/2)");
  return (2 * p - 1) / (2 * p - 2) / k;
}

VerdictReport decide(const std::vector<RoundResult>& rounds, int w) {
  VerdictReport rep;
  int tests = 0, computations = 0;
  std::map<std::vector<int>, int> votes;
  for (const RoundResult& r : rounds) {
    if (r.kind == RoundKind::kTest) {
      ++tests;
      if (!r.passed()) ++rep.c_fail;
    } else {
      ++computations;
      ++votes[r.output];
    }
  }
  for (const auto& [y, count] : votes)
    if (2 * count > computations) rep.majority = y;
  rep.accepted = rep.c_fail < w && rep.majority.has_value();
  if (rep.accepted) rep.output = rep.majority;
  rep.test_failure_rate =
      tests ? static_cast<double>(rep.c_fail) / tests : 0.0;
  return rep;
}

VerdictReport run_protocol(
    const ProtocolParams& params, const NoiseModel& noise,
    const RunOptions& options) {
  params.validate();
  noise.validate();
  if (options.workers < 1)
    throw std::invalid_argument("need at least one worker");
  if (options.ground_truth &&
      options.ground_truth->size() != params.pattern.graph().outputs().size())
    throw std::invalid_argument("ground truth length differs from |O|");

  const MeasurementPattern& pat = params.pattern;
  const LazySchedule schedule = compile(pat);
  Engine plan_rng = make_engine(options.seed, kPlanStream, 0);
  const std::vector<RoundSecrets> plan = plan_rounds(params, plan_rng);

  std::vector<RoundResult> results(plan.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < plan.size();) {
      try {
        RoundSecrets secrets = plan[j];
        for (int attempt = 0;; ++attempt) {
          RoundResult r = execute_round(
              pat, schedule, secrets, params.x, noise,
              make_engine(options.seed, kRoundStream, j, attempt));
          r.attempts = attempt + 1;
          if (!options.redo || !options.redo(j, attempt) ||
              attempt + 1 >= options.max_attempts) {
            results[j] = std::move(r);
            break;
          }
          Engine fresh = make_engine(options.seed, kRedoStream, j, attempt);
          secrets = draw_secrets(pat, secrets.kind, fresh);
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = plan.size();
      }
    }
  };

  const int nthreads =
      std::min<int>(options.workers, static_cast<int>(plan.size()));
  if (nthreads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  VerdictReport rep = decide(results, params.w);

  std::vector<bool> test_flags, wrong_flags;
  for (const RoundResult& r : results) {
    if (r.kind == RoundKind::kTest)
      test_flags.push_back(!r.passed());
    else if (options.ground_truth)
      wrong_flags.push_back(r.output != *options.ground_truth);
  }
  if (options.ground_truth)
    rep.incorrect_output_rate =
        static_cast<double>(
            std::count(wrong_flags.begin(), wrong_flags.end(), true)) /
        wrong_flags.size();

  if (options.bootstrap_sample > 0 && options.bootstrap_resamples > 0) {
    Engine boot = make_engine(options.seed, kBootstrapStream, 0);
    rep.test_failure_bootstrap = bootstrap_rates(
        test_flags, std::min(options.bootstrap_sample, test_flags.size()),
        options.bootstrap_resamples, boot);
    if (options.ground_truth)
      rep.incorrect_output_bootstrap = bootstrap_rates(
          wrong_flags, std::min(options.bootstrap_sample, wrong_flags.size()),
          options.bootstrap_resamples, boot);
  }
  rep.rounds = std::move(results);
  return rep;
}

std::string rounds_to_csv(
    const VerdictReport& report,
    const std::optional<std::vector<int>>& ground_truth) {
  std::ostringstream os;
  os << "round,kind,colour,passed,output\n";
  for (std::size_t j = 0; j < report.rounds.size(); ++j) {
    const RoundResult& r = report.rounds[j];
    os << j << ',' << to_string(r.kind) << ',';
    if (r.kind == RoundKind::kTest) {
      os << r.colour << ',' << (r.passed() ? 1 : 0) << ",\n";
    } else {
      os << ',';
      if (ground_truth) os << (r.output == *ground_truth ? 1 : 0);
      os << ',' << bits_to_string(r.output) << '\n';
    }
  }
  return os.str();
}

std::string report_to_json(const VerdictReport& report) {
  using nlohmann::json;
  auto rate = [](const std::optional<RateEstimate>& e) -> json {
    if (!e) return nullptr;
    return {{"mean", e->mean}, {"std", e->std}};
  };
  int tests = 0;
  for (const RoundResult& r : report.rounds) tests += r.kind == RoundKind::kTest;
  json j;
  j["decision"] = report.accepted ? "accept" : "abort";
  j["output"] = report.output ? json(bits_to_string(*report.output)) : json();
  j["majority"] =
      report.majority ? json(bits_to_string(*report.majority)) : json();
  j["c_fail"] = report.c_fail;
  j["test_rounds"] = tests;
  j["computation_rounds"] = static_cast<int>(report.rounds.size()) - tests;
  j["test_failure_rate"] = report.test_failure_rate;
  j["incorrect_output_rate"] = report.incorrect_output_rate
                                   ? json(*report.incorrect_output_rate)
                                   : json();
  j["bootstrap"] = {
      {"test_failure", rate(report.test_failure_bootstrap)},
      {"incorrect_output", rate(report.incorrect_output_bootstrap)}};
  return j.dump(2) + "\n";
}

}  // namespace vbqc
