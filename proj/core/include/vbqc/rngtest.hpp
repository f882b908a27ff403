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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vbqc {

/** One bit per element, 0 or 1. */
using BitStream = std::vector<std::uint8_t>;

constexpr std::size_t kFipsBits = 20000;

/**
 * Acceptance intervals of the FIPS 140-2 power-up tests. All intervals are
 * inclusive except the monobit and poker bounds, which are strict.
 */
struct FipsBounds {
  int monobit_low;
  int monobit_high;
  double poker_low;
  double poker_high;
  /** Lengths 1..5 and 6+, applied to runs of zeros and of ones alike. */
  std::array<std::pair<int, int>, 6> runs;
  /** A run this long or longer fails the long run test. */
  int long_run;

  /** FIPS 140-2 as amended by its change notices (the default). */
  static FipsBounds change_notice();
  /** The bounds of the original May 2001 publication. */
  static FipsBounds original();
};

struct MonobitResult {
  bool passed;
  int ones;
};

struct PokerResult {
  bool passed;
  double statistic;
  std::array<int, 16> counts;
};

struct RunsResult {
  bool passed;
  /** counts[symbol][k] for runs of length k+1, the last bin holding 6+. */
  std::array<std::array<int, 6>, 2> counts;
};

struct LongRunResult {
  bool passed;
  int longest;
};

struct FipsReport {
  MonobitResult monobit;
  PokerResult poker;
  RunsResult runs;
  LongRunResult long_run;

  bool passed() const {
    return monobit.passed && poker.passed && runs.passed && long_run.passed;
  }
};

// Each test throws std::invalid_argument unless given exactly 20,000 bits.
MonobitResult monobit(
    std::span<const std::uint8_t> bits,
    const FipsBounds& b = FipsBounds::change_notice());
PokerResult poker(
    std::span<const std::uint8_t> bits,
    const FipsBounds& b = FipsBounds::change_notice());
RunsResult runs(
    std::span<const std::uint8_t> bits,
    const FipsBounds& b = FipsBounds::change_notice());
LongRunResult long_run(
    std::span<const std::uint8_t> bits,
    const FipsBounds& b = FipsBounds::change_notice());
FipsReport fips_suite(
    std::span<const std::uint8_t> bits,
    const FipsBounds& b = FipsBounds::change_notice());

/** Reads '0'/'1' characters, ignoring whitespace; anything else throws. */
BitStream parse_ascii_bits(std::string_view text);
/** Unpacks bytes most significant bit first. */
BitStream unpack_bytes(std::string_view bytes);

std::string fips_report_to_json(const FipsReport& r);

}  // namespace vbqc
