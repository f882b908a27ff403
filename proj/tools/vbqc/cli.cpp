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

#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "vbqc/compiler.hpp"
#include "vbqc/pattern.hpp"
#include "vbqc/protocol.hpp"
#include "vbqc/rngtest.hpp"
#include "vbqc/secretdep.hpp"
#include "vbqc/simulator.hpp"

namespace vbqc::cli {

namespace {

using nlohmann::json;

// Substreams of the command seed, disjoint from the protocol's own.
constexpr std::uint64_t kCircuitStream = 10;
constexpr std::uint64_t kRandomBitStream = 11;
constexpr std::uint64_t kTomographyStream = 12;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Sink {
  std::ostream& out;

  /** Writes to `path`, or to the command's standard output if empty. */
  void write(const std::string& path, const std::string& text) const {
    if (path.empty() || path == "-") {
      out << text;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
  }
};

std::vector<int> parse_bits(const std::string& s) {
  std::vector<int> bits;
  for (char c : s) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("bit string may only contain 0 and 1");
    bits.push_back(c - '0');
  }
  return bits;
}

std::string rate_string(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", r);
  return buf;
}

std::string bits_string(const std::vector<int>& bits) {
  std::string s;
  for (int b : bits) s += b ? '1' : '0';
  return s;
}

struct ProtocolFlags {
  int d = 500;
  int t = 500;
  int w = 125;
  double p = 0.0;
  std::string noise = "none";
  std::uint64_t seed = 1;
  int workers = 1;
  std::size_t bootstrap_sample = 800;
  std::size_t bootstrap_resamples = 10;

  void add_to(CLI::App* app) {
    app->add_option("-d,--computation-rounds", d, "Computation rounds")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("-t,--test-rounds", t, "Test rounds")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("-w,--tolerance", w, "Abort once this many tests fail")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    app->add_option("-p,--inherent-error", p, "Error of the computation")
        ->capture_default_str();
    app->add_option("--noise", noise,
                    "depol1=P,depol2=P,measflip=P,prepdepol=P,prepdeph=P,"
                    "prepdep=FILE or none")
        ->capture_default_str();
    app->add_option("--seed", seed, "Master seed")
        ->envname("VBQC_SEED")
        ->capture_default_str();
    app->add_option("--workers", workers, "Worker threads")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--bootstrap-sample", bootstrap_sample,
                    "Rounds per bootstrap resample (0 disables)")
        ->capture_default_str();
    app->add_option("--bootstrap-resamples", bootstrap_resamples,
                    "Bootstrap resamples")
        ->capture_default_str();
  }

  NoiseModel noise_model() const { return parse_noise_spec(noise, read_file); }

  RunOptions options(std::uint64_t s) const {
    RunOptions o;
    o.seed = s;
    o.workers = workers;
    o.bootstrap_sample = bootstrap_sample;
    o.bootstrap_resamples = bootstrap_resamples;
    return o;
  }

  json config() const {
    return {{"d", d}, {"t", t}, {"w", w}, {"p", p},
            {"noise", noise}, {"seed", seed}};
  }
};

json verdict_json(
    const VerdictReport& rep, const ProtocolParams& params,
    const ProtocolFlags& flags) {
  json j = json::parse(report_to_json(rep));
  j["config"] = flags.config();
  j["threshold"] =
      threshold_bound(static_cast<int>(params.pattern.colouring().size()),
                      params.p);
  j["pattern"] = {{"vertices", params.pattern.graph().size()},
                  {"outputs", params.pattern.graph().outputs().size()},
                  {"peak_qubits", peak_qubits(compile(params.pattern))}};
  return j;
}

void cmd_grover(CLI::App& app, const Sink& sink) {
  auto* sub = app.add_subcommand(
      "grover", "Verified two-qubit Grover search on the 4x2 cluster");
  auto flags = std::make_shared<ProtocolFlags>();
  auto tau = std::make_shared<int>(0);
  auto json_out = std::make_shared<std::string>();
  auto csv_out = std::make_shared<std::string>();
  sub->add_option("--tau", *tau, "Marked element")
      ->capture_default_str()
      ->check(CLI::Range(0, 3));
  flags->add_to(sub);
  sub->add_option("--json", *json_out, "Verdict report (default stdout)");
  sub->add_option("--csv", *csv_out, "Per-round CSV");
  sub->callback([=] {
    ProtocolParams params{.d = flags->d, .t = flags->t, .w = flags->w,
                          .pattern = grover_pattern(*tau), .x = {0, 0},
                          .p = flags->p};
    const NoiseModel noise = flags->noise_model();
    RunOptions opts = flags->options(flags->seed);
    opts.ground_truth = reference_output(params.pattern, params.x,
                                         make_engine(flags->seed, 0, 0));
    const VerdictReport rep = run_protocol(params, noise, opts);
    json j = verdict_json(rep, params, *flags);
    j["config"]["tau"] = *tau;
    j["expected_output"] = bits_string(*opts.ground_truth);
    sink.write(*json_out, j.dump(2) + "\n");
    if (!csv_out->empty())
      sink.write(*csv_out, rounds_to_csv(rep, opts.ground_truth));
  });
}

void cmd_cnot_grid(CLI::App& app, const Sink& sink) {
  auto* sub = app.add_subcommand(
      "cnot-grid", "Volumetric sweep of verified CNOT-grid circuits");
  auto flags = std::make_shared<ProtocolFlags>();
  flags->d = flags->t = 100;
  flags->w = 25;
  auto ns = std::make_shared<std::vector<int>>(std::vector<int>{2, 3, 4});
  auto ms = std::make_shared<std::vector<int>>(std::vector<int>{1, 2, 3});
  auto b = std::make_shared<std::string>();
  auto circuits = std::make_shared<int>(5);
  auto csv_out = std::make_shared<std::string>();
  sub->add_option("-n,--wires", *ns, "Wire counts to sweep")
      ->capture_default_str()
      ->check(CLI::Range(2, 12));
  sub->add_option("-m,--layers", *ms, "Layer counts to sweep")
      ->capture_default_str()
      ->check(CLI::Range(1, 64));
  sub->add_option("-b,--input", *b,
                  "Fixed input bit string (one n); random inputs otherwise");
  sub->add_option("--circuits", *circuits, "Random inputs per cell")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  flags->add_to(sub);
  sub->add_option("--csv", *csv_out, "Cell CSV (default stdout)");
  sub->callback([=] {
    const NoiseModel noise = flags->noise_model();
    std::ostringstream os;
    os << "n,m,vertices,peak_qubits,circuits,test_failure_mean,"
          "test_failure_worst,incorrect_output_mean,incorrect_output_worst,"
          "accepted\n";
    std::uint64_t cell = 0;
    for (int n : *ns)
      for (int m : *ms) {
        const int count = b->empty() ? *circuits : 1;
        double tf_sum = 0, tf_max = 0, io_sum = 0, io_max = 0;
        int accepted = 0, peak = 0;
        for (int c = 0; c < count; ++c) {
          std::vector<int> input;
          if (b->empty()) {
            Engine rng = make_engine(flags->seed, kCircuitStream, cell, c);
            for (int i = 0; i < n; ++i) input.push_back(random_bit(rng));
          } else {
            input = parse_bits(*b);
            if (static_cast<int>(input.size()) != n)
              throw std::invalid_argument("--input must have n bits");
          }
          ProtocolParams params{.d = flags->d, .t = flags->t, .w = flags->w,
                                .pattern = cnot_grid_pattern(n, m, input),
                                .x = std::vector<int>(n, 0), .p = flags->p};
          RunOptions opts = flags->options(
              derive_seed(flags->seed, kCircuitStream + 1, cell, c));
          opts.ground_truth = cnot_grid_expected_output(n, m, input);
          opts.bootstrap_sample = 0;
          const VerdictReport rep = run_protocol(params, noise, opts);
          peak = peak_qubits(compile(params.pattern));
          tf_sum += rep.test_failure_rate;
          tf_max = std::max(tf_max, rep.test_failure_rate);
          io_sum += *rep.incorrect_output_rate;
          io_max = std::max(io_max, *rep.incorrect_output_rate);
          accepted += rep.accepted;
        }
        os << n << ',' << m << ',' << cnot_grid_vertex_count(n, m) << ','
           << peak << ',' << count << ',' << rate_string(tf_sum / count)
           << ',' << rate_string(tf_max) << ','
           << rate_string(io_sum / count) << ',' << rate_string(io_max)
           << ',' << accepted << '\n';
        ++cell;
      }
    sink.write(*csv_out, os.str());
  });
}

void cmd_run(CLI::App& app, const Sink& sink) {
  auto* sub = app.add_subcommand("run", "Run the protocol on a JSON pattern");
  auto flags = std::make_shared<ProtocolFlags>();
  auto file = std::make_shared<std::string>();
  auto x = std::make_shared<std::string>();
  auto json_out = std::make_shared<std::string>();
  auto csv_out = std::make_shared<std::string>();
  sub->add_option("pattern", *file, "Pattern JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("-x,--input", *x, "Input bits over I (default all zero)");
  flags->add_to(sub);
  sub->add_option("--json", *json_out, "Verdict report (default stdout)");
  sub->add_option("--csv", *csv_out, "Per-round CSV");
  sub->callback([=] {
    MeasurementPattern pattern = pattern_from_json(read_file(*file));
    std::vector<int> input =
        x->empty() ? std::vector<int>(pattern.graph().inputs().size(), 0)
                   : parse_bits(*x);
    ProtocolParams params{.d = flags->d, .t = flags->t, .w = flags->w,
                          .pattern = std::move(pattern), .x = input,
                          .p = flags->p};
    RunOptions opts = flags->options(flags->seed);
    const VerdictReport rep =
        run_protocol(params, flags->noise_model(), opts);
    sink.write(*json_out, verdict_json(rep, params, *flags).dump(2) + "\n");
    if (!csv_out->empty()) sink.write(*csv_out, rounds_to_csv(rep));
  });
}

struct PatternChoice {
  std::string file;
  int grover = -1;
  std::vector<int> cnot;  // n, m
  std::string b;

  void add_to(CLI::App* app) {
    auto* g = app->add_option_group("pattern source");
    g->add_option("--file", file, "Pattern JSON file")
        ->check(CLI::ExistingFile);
    g->add_option("--grover", grover, "Built-in Grover pattern for tau")
        ->check(CLI::Range(0, 3));
    g->add_option("--cnot", cnot, "Built-in CNOT grid: N M")->expected(2);
    g->require_option(1);
    app->add_option("-b,--input", b, "CNOT grid input bits (default zeros)");
  }

  MeasurementPattern build() const {
    if (!file.empty()) return pattern_from_json(read_file(file));
    if (grover >= 0) return grover_pattern(grover);
    std::vector<int> bits =
        b.empty() ? std::vector<int>(cnot.at(0), 0) : parse_bits(b);
    return cnot_grid_pattern(cnot.at(0), cnot.at(1), bits);
  }
};

void cmd_pattern(CLI::App& app, const Sink& sink) {
  auto* sub = app.add_subcommand(
      "pattern", "Print a pattern as JSON together with its statistics");
  auto choice = std::make_shared<PatternChoice>();
  auto stats_only = std::make_shared<bool>(false);
  choice->add_to(sub);
  sub->add_flag("--stats", *stats_only, "Only print the statistics");
  sub->callback([=] {
    const MeasurementPattern p = choice->build();
    const PatternStats s = pattern_stats(p);
    json stats = {{"vertices", s.vertices}, {"edges", s.edges},
                  {"outputs", s.outputs}, {"depth", s.depth},
                  {"peak_qubits", peak_qubits(compile(p))}};
    if (*stats_only) {
      sink.write("", stats.dump(2) + "\n");
      return;
    }
    json j = json::parse(pattern_to_json(p));
    j["stats"] = stats;
    sink.write("", j.dump(2) + "\n");
  });
}

void cmd_compile(CLI::App& app, const Sink& sink) {
  auto* sub =
      app.add_subcommand("compile", "Print the lazy schedule of a pattern");
  auto choice = std::make_shared<PatternChoice>();
  choice->add_to(sub);
  sub->callback([=] {
    const MeasurementPattern p = choice->build();
    const LazySchedule s = compile(p);
    std::ostringstream os;
    os << "# slots " << s.slot_count << ", peak " << peak_qubits(s) << '\n'
       << dump_schedule(s);
    sink.write("", os.str());
  });
}

void cmd_tomography_fit(CLI::App& app, const Sink& sink) {
  auto* sub = app.add_subcommand(
      "tomography-fit",
      "Fit the best secret-independent preparation channel");
  auto input = std::make_shared<std::string>();
  auto json_out = std::make_shared<std::string>();
  auto seed = std::make_shared<std::uint64_t>(1);
  auto starts = std::make_shared<int>(6);
  auto chunk = std::make_shared<long>(1000);
  auto resamples = std::make_shared<int>(1000);
  sub->add_option("--counts", *input,
                  "CSV theta_index,basis,outcome,count (default: the "
                  "built-in reference estimates)")
      ->check(CLI::ExistingFile);
  sub->add_option("--seed", *seed, "Seed for starts and bootstrap")
      ->envname("VBQC_SEED")
      ->capture_default_str();
  sub->add_option("--starts", *starts, "Random starts besides identity")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--chunk", *chunk, "Bootstrap chunk size")
      ->capture_default_str();
  sub->add_option("--resamples", *resamples, "Bootstrap resamples")
      ->capture_default_str();
  sub->add_option("--json", *json_out, "Output (default stdout)");
  sub->callback([=] {
    StateSet states;
    std::optional<TomographyData> data;
    if (input->empty()) {
      states = reference_tomography_states();
    } else {
      data = parse_tomography_csv(read_file(*input));
      for (int j = 0; j < 8; ++j) states[j] = reconstruct_state(data->counts[j]);
    }
    FitOptions opts;
    opts.seed = *seed;
    opts.starts = *starts;
    const FitResult fit = fit_secret_independent_channel(states, opts);
    json j = json::parse(fit_to_json(fit, states));
    j["source"] = input->empty() ? "built-in" : *input;
    if (data) {
      Engine rng = make_engine(*seed, kTomographyStream, 0);
      const auto boot = bootstrap_infidelity(*data, rng, *chunk, *resamples);
      json rows = json::array();
      for (int t = 0; t < 8; ++t)
        rows.push_back({{"theta_index", t},
                        {"mean", boot[t].mean},
                        {"variance", boot[t].variance}});
      j["bootstrap_infidelity"] = rows;
    }
    sink.write(*json_out, j.dump(2) + "\n");
  });
}

void cmd_rng_test(CLI::App& app, const Sink& sink) {
  auto* sub = app.add_subcommand(
      "rng-test", "FIPS 140-2 tests on a 20,000-bit stream");
  auto input = std::make_shared<std::string>();
  auto format = std::make_shared<std::string>("ascii");
  auto simulate = std::make_shared<bool>(false);
  auto noise = std::make_shared<std::string>("none");
  auto seed = std::make_shared<std::uint64_t>(1);
  auto bounds = std::make_shared<std::string>("change-notice");
  auto json_out = std::make_shared<std::string>();
  auto bits_out = std::make_shared<std::string>();
  auto* src = sub->add_option_group("source");
  src->add_option("--bits", *input, "Bit file")->check(CLI::ExistingFile);
  src->add_flag("--simulate", *simulate,
                "Measure 20,000 simulated |+> preparations");
  src->require_option(1);
  sub->add_option("--format", *format, "Bit file format")
      ->capture_default_str()
      ->check(CLI::IsMember({"ascii", "binary"}));
  sub->add_option("--noise", *noise, "Noise model for --simulate")
      ->capture_default_str();
  sub->add_option("--seed", *seed, "Seed for --simulate")
      ->envname("VBQC_SEED")
      ->capture_default_str();
  sub->add_option("--bounds", *bounds, "FIPS bound set")
      ->capture_default_str()
      ->check(CLI::IsMember({"change-notice", "original"}));
  sub->add_option("--json", *json_out, "Report (default stdout)");
  sub->add_option("--save-bits", *bits_out, "Write the tested bits as ASCII");
  sub->callback([=] {
    BitStream bits;
    if (*simulate) {
      const NoiseModel model = parse_noise_spec(*noise, read_file);
      bits.reserve(kFipsBits);
      for (std::size_t i = 0; i < kFipsBits; ++i) {
        Simulator sim(model, make_engine(*seed, kRandomBitStream, i));
        bits.push_back(static_cast<std::uint8_t>(sim.sample_random_bit(0)));
      }
    } else if (*format == "ascii") {
      bits = parse_ascii_bits(read_file(*input));
    } else {
      bits = unpack_bytes(read_file(*input));
    }
    const FipsBounds b = *bounds == "original" ? FipsBounds::original()
                                               : FipsBounds::change_notice();
    const FipsReport rep = fips_suite(bits, b);
    json j = json::parse(fips_report_to_json(rep));
    j["bounds"] = *bounds;
    j["source"] = *simulate ? "simulated" : *input;
    sink.write(*json_out, j.dump(2) + "\n");
    if (!bits_out->empty()) {
      std::string text;
      for (auto x : bits) text += x ? '1' : '0';
      sink.write(*bits_out, text + "\n");
    }
  });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Verifiable measurement-based quantum computation toolkit",
               "vbqc"};
  app.set_config("--config", "", "TOML or INI file with option values");
  app.require_subcommand(1);
  Sink sink{out};
  cmd_grover(app, sink);
  cmd_cnot_grid(app, sink);
  cmd_run(app, sink);
  cmd_pattern(app, sink);
  cmd_compile(app, sink);
  cmd_tomography_fit(app, sink);
  cmd_rng_test(app, sink);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    err << "vbqc: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace vbqc::cli
