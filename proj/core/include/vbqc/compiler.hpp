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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vbqc/pattern.hpp"

namespace vbqc {

/**
 * Per-vertex 8-bit classical registers plus the global round-type bit,
 * colour selection and scratch space, as seen by one executing round.
 *
 * Bit layout (bit 1 is the least significant):
 *   1   measurement outcome b_v
 *   2-4 angle one-time pad j (theta_v = j*pi/4); for dummies the random
 *       measurement angle
 *   5   outcome one-time pad r_v
 *   6   trap flag (test rounds)
 *   7   dummy randomness d_v
 *   8   Z-correction accumulator (decoded outcome of f^{-1}(v))
 *
 * Reading a bit that has not been written in this round throws
 * std::logic_error; bit 1 may be written only once.
 */
class RegisterFile {
 public:
  enum Bit : int {
    kOutcome = 1,
    kPad0 = 2,
    kPad1 = 3,
    kPad2 = 4,
    kOutcomePad = 5,
    kTrap = 6,
    kDummy = 7,
    kZCorrection = 8,
  };

  RegisterFile() = default;
  explicit RegisterFile(const std::vector<Vertex>& vertices);

  bool bit(Vertex v, int which) const;
  void set_bit(Vertex v, int which, bool value);
  bool written(Vertex v, int which) const;
  std::uint8_t raw(Vertex v) const { return slot(v).value; }

  Angle angle_pad(Vertex v) const;
  void set_angle_pad(Vertex v, Angle a);

  /** Writes bit 1; throws std::logic_error if it was already written. */
  void record_outcome(Vertex v, bool b);
  /** b_v xor r_v. */
  bool decoded_outcome(Vertex v) const;

  void toggle_z(Vertex v, bool by);

  // Scratch registers.
  bool x_correction(Vertex v) const { return slot(v).x_correction; }
  void toggle_x(Vertex v, bool by) { slot(v).x_correction ^= by; }
  bool input_bit(Vertex v) const { return slot(v).input; }
  void set_input_bit(Vertex v, bool b) { slot(v).input = b; }

  bool test_round = false;
  int colour = -1;

 private:
  struct Register {
    std::uint8_t value = 0;
    std::uint8_t written = 0;
    bool x_correction = false;
    bool input = false;
  };
  Register& slot(Vertex v);
  const Register& slot(Vertex v) const;

  std::map<Vertex, Register> regs_;
};

enum class OpCode {
  kAlloc,    // bind vertex to a free qubit slot
  kPrep,     // prepare |theta> or Z^d|+> from the vertex registers
  kEntangle,  // XX between two live vertices
  kMeasure,   // measure at the angle computed from the registers
  kFree,      // release the (reset) slot
  kAccumulateZ,  // Z register of `vertex` ^= decoded outcome of `other`
  kAccumulateX,  // X scratch of `vertex` ^= decoded outcome of `other`
};

struct Instruction {
  OpCode op;
  Vertex vertex;
  Vertex other = 0;  // partner for kEntangle, source for kAccumulate*
  int slot = -1;
  int other_slot = -1;

  bool operator==(const Instruction&) const = default;
};

/** A round-independent instruction stream over physical qubit slots. */
struct LazySchedule {
  std::vector<Instruction> instructions;
  int slot_count = 0;
};

/**
 * Lazy compilation: vertices are measured in the pattern order followed by
 * the outputs. Just before measuring v, every edge from v to a vertex not yet
 * measured is applied; a vertex is allocated and prepared immediately before
 * its first entangling gate or measurement, and its slot is reset and reused
 * after measurement. For patterns with flow this needs at most |O|+1 slots.
 *
 * Throws std::invalid_argument if the order violates the flow.
 */
LazySchedule compile(const MeasurementPattern& p);

/** Maximum number of simultaneously allocated slots. */
int peak_qubits(const LazySchedule& s);

/** One instruction per line, e.g. "xx v1 v4 q0 q2". */
std::string dump_schedule(const LazySchedule& s);

/**
 * Replays the schedule against the pattern without any quantum state and
 * returns every invariant violation found: reads of unwritten registers,
 * operations on free or foreign slots, entangling after a measurement,
 * measurements out of order, early allocation, missing or repeated edges.
 */
std::vector<std::string> replay_check(
    const MeasurementPattern& p, const LazySchedule& s);

}  // namespace vbqc
