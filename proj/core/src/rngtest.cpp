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

#include "vbqc/rngtest.hpp"

#include <cctype>
#include <json.hpp>
#include <stdexcept>

namespace vbqc {

namespace {

void check_length(std::span<const std::uint8_t> bits) {
  if (bits.size() != kFipsBits)
    throw std::invalid_argument(
        "FIPS 140-2 tests need exactly 20000 bits, got " +
        std::to_string(bits.size()));
}

}  // namespace

FipsBounds FipsBounds::change_notice() {
  return {9725, 10275, 2.16, 46.17,
          {{{2315, 2685}, {1114, 1386}, {527, 723}, {240, 384}, {103, 209},
            {103, 209}}},
          26};
}

FipsBounds FipsBounds::original() {
  return {9654, 10346, 1.03, 57.4,
          {{{2267, 2733}, {1079, 1421}, {502, 748}, {223, 402}, {90, 223},
            {90, 223}}},
          34};
}

MonobitResult monobit(
    std::span<const std::uint8_t> bits, const FipsBounds& b) {
  check_length(bits);
  int ones = 0;
  for (auto x : bits) ones += x & 1;
  return {b.monobit_low < ones && ones < b.monobit_high, ones};
}

PokerResult poker(std::span<const std::uint8_t> bits, const FipsBounds& b) {
  check_length(bits);
  PokerResult r{};
  for (std::size_t i = 0; i < bits.size(); i += 4)
    ++r.counts[(bits[i] & 1) << 3 | (bits[i + 1] & 1) << 2 |
               (bits[i + 2] & 1) << 1 | (bits[i + 3] & 1)];
  double sum = 0.0;
  for (int f : r.counts) sum += static_cast<double>(f) * f;
  r.statistic = 16.0 / 5000.0 * sum - 5000.0;
  r.passed = b.poker_low < r.statistic && r.statistic < b.poker_high;
  return r;
}

RunsResult runs(std::span<const std::uint8_t> bits, const FipsBounds& b) {
  check_length(bits);
  RunsResult r{};
  std::size_t i = 0;
  while (i < bits.size()) {
    const int sym = bits[i] & 1;
    std::size_t j = i;
    while (j < bits.size() && (bits[j] & 1) == sym) ++j;
    const std::size_t len = j - i;
    ++r.counts[sym][std::min<std::size_t>(len, 6) - 1];
    i = j;
  }
  r.passed = true;
  for (const auto& per_symbol : r.counts)
    for (int k = 0; k < 6; ++k)
      if (per_symbol[k] < b.runs[k].first || per_symbol[k] > b.runs[k].second)
        r.passed = false;
  return r;
}

LongRunResult long_run(
    std::span<const std::uint8_t> bits, const FipsBounds& b) {
  check_length(bits);
  int longest = 0, current = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    current = i > 0 && (bits[i] & 1) == (bits[i - 1] & 1) ? current + 1 : 1;
    longest = std::max(longest, current);
  }
  return {longest < b.long_run, longest};
}

FipsReport fips_suite(std::span<const std::uint8_t> bits, const FipsBounds& b) {
  return {monobit(bits, b), poker(bits, b), runs(bits, b), long_run(bits, b)};
}

BitStream parse_ascii_bits(std::string_view text) {
  BitStream out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '0' || c == '1') {
      out.push_back(static_cast<std::uint8_t>(c - '0'));
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      throw std::invalid_argument(
          std::string("unexpected character '") + c + "' in bit file");
    }
  }
  return out;
}

BitStream unpack_bytes(std::string_view bytes) {
  BitStream out;
  out.reserve(bytes.size() * 8);
  for (char c : bytes)
    for (int k = 7; k >= 0; --k)
      out.push_back((static_cast<unsigned char>(c) >> k) & 1);
  return out;
}

std::string fips_report_to_json(const FipsReport& r) {
  using nlohmann::json;
  json runs_json;
  for (int sym = 0; sym < 2; ++sym)
    runs_json[sym ? "ones" : "zeros"] = r.runs.counts[sym];
  json j = {
      {"passed", r.passed()},
      {"monobit", {{"passed", r.monobit.passed}, {"ones", r.monobit.ones}}},
      {"poker",
       {{"passed", r.poker.passed},
        {"statistic", r.poker.statistic},
        {"counts", r.poker.counts}}},
      {"runs", {{"passed", r.runs.passed}, {"counts", runs_json}}},
      {"long_run",
       {{"passed", r.long_run.passed}, {"longest", r.long_run.longest}}},
  };
  return j.dump(2) + "\n";
}

}  // namespace vbqc
