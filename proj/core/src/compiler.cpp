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

#include "vbqc/compiler.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace vbqc {

namespace {

void check_bit_index(int which) {
  if (which < 1 || which > 8)
    throw std::out_of_range("register bit index must be in 1..8");
}

}  // namespace

RegisterFile::RegisterFile(const std::vector<Vertex>& vertices) {
  for (Vertex v : vertices) regs_[v];
}

RegisterFile::Register& RegisterFile::slot(Vertex v) {
  auto it = regs_.find(v);
  if (it == regs_.end())
    throw std::out_of_range("no register for vertex " + std::to_string(v));
  return it->second;
}

const RegisterFile::Register& RegisterFile::slot(Vertex v) const {
  auto it = regs_.find(v);
  if (it == regs_.end())
    throw std::out_of_range("no register for vertex " + std::to_string(v));
  return it->second;
}

bool RegisterFile::bit(Vertex v, int which) const {
  check_bit_index(which);
  const Register& r = slot(v);
  const std::uint8_t mask = std::uint8_t(1u << (which - 1));
  if (!(r.written & mask))
    throw std::logic_error(
        "read of unwritten register bit " + std::to_string(which) +
        " of vertex " + std::to_string(v));
  return r.value & mask;
}

void RegisterFile::set_bit(Vertex v, int which, bool value) {
  check_bit_index(which);
  Register& r = slot(v);
  const std::uint8_t mask = std::uint8_t(1u << (which - 1));
  r.written |= mask;
  r.value = value ? (r.value | mask) : (r.value & ~mask);
}

bool RegisterFile::written(Vertex v, int which) const {
  check_bit_index(which);
  return slot(v).written & (1u << (which - 1));
}

Angle RegisterFile::angle_pad(Vertex v) const {
  int j = bit(v, kPad0) | (bit(v, kPad1) << 1) | (bit(v, kPad2) << 2);
  return Angle::from_steps(j);
}

void RegisterFile::set_angle_pad(Vertex v, Angle a) {
  set_bit(v, kPad0, a.steps() & 1);
  set_bit(v, kPad1, a.steps() & 2);
  set_bit(v, kPad2, a.steps() & 4);
}

void RegisterFile::record_outcome(Vertex v, bool b) {
  if (written(v, kOutcome))
    throw std::logic_error(
        "outcome of vertex " + std::to_string(v) + " written twice");
  set_bit(v, kOutcome, b);
}

bool RegisterFile::decoded_outcome(Vertex v) const {
  return bit(v, kOutcome) ^ bit(v, kOutcomePad);
}

void RegisterFile::toggle_z(Vertex v, bool by) {
  set_bit(v, kZCorrection, bit(v, kZCorrection) ^ by);
}

LazySchedule compile(const MeasurementPattern& p) {
  const OpenGraph& g = p.graph();
  if (auto r = validate_flow(g, p.flow()); !r.ok())
    throw std::invalid_argument(
        "measurement order violates the flow: " + r.summary());

  LazySchedule s;
  std::set<int> free_slots;
  std::map<Vertex, int> slot_of;
  std::set<Vertex> measured;

  auto ensure_live = [&](Vertex v) {
    if (slot_of.count(v)) return slot_of[v];
    int q;
    if (free_slots.empty()) {
      q = s.slot_count++;
    } else {
      q = *free_slots.begin();
      free_slots.erase(free_slots.begin());
    }
    slot_of[v] = q;
    s.instructions.push_back({OpCode::kAlloc, v, 0, q});
    s.instructions.push_back({OpCode::kPrep, v, 0, q});
    return q;
  };

  std::vector<Vertex> sequence = g.order();
  sequence.insert(sequence.end(), g.outputs().begin(), g.outputs().end());
  for (Vertex v : sequence) {
    for (Vertex u : g.neighbours(v)) {
      if (measured.count(u)) continue;  // fired when u was measured
      int qv = ensure_live(v);
      int qu = ensure_live(u);
      s.instructions.push_back({OpCode::kEntangle, v, u, qv, qu});
    }
    int q = ensure_live(v);
    s.instructions.push_back({OpCode::kMeasure, v, 0, q});
    s.instructions.push_back({OpCode::kFree, v, 0, q});
    slot_of.erase(v);
    free_slots.insert(q);
    measured.insert(v);

    auto f = p.flow().find(v);
    if (f == p.flow().end()) continue;
    s.instructions.push_back({OpCode::kAccumulateZ, f->second, v});
    for (Vertex w : g.neighbours(f->second))
      if (w != v) s.instructions.push_back({OpCode::kAccumulateX, w, v});
  }
  return s;
}

int peak_qubits(const LazySchedule& s) {
  int live = 0, peak = 0;
  for (const Instruction& ins : s.instructions) {
    if (ins.op == OpCode::kAlloc) peak = std::max(peak, ++live);
    if (ins.op == OpCode::kFree) --live;
  }
  return peak;
}

std::string dump_schedule(const LazySchedule& s) {
  std::ostringstream os;
  for (const Instruction& ins : s.instructions) {
    switch (ins.op) {
      case OpCode::kAlloc:
        os << "alloc   v" << ins.vertex << " -> q" << ins.slot;
        break;
      case OpCode::kPrep:
        os << "prep    v" << ins.vertex << " q" << ins.slot;
        break;
      case OpCode::kEntangle:
        os << "xx      v" << ins.vertex << " v" << ins.other << " q"
           << ins.slot << " q" << ins.other_slot;
        break;
      case OpCode::kMeasure:
        os << "measure v" << ins.vertex << " q" << ins.slot << " -> b"
           << ins.vertex;
        break;
      case OpCode::kFree:
        os << "free    v" << ins.vertex << " q" << ins.slot;
        break;
      case OpCode::kAccumulateZ:
        os << "zacc    v" << ins.vertex << " ^= s" << ins.other;
        break;
      case OpCode::kAccumulateX:
        os << "xacc    v" << ins.vertex << " ^= s" << ins.other;
        break;
    }
    os << '\n';
  }
  return os.str();
}

std::vector<std::string> replay_check(
    const MeasurementPattern& p, const LazySchedule& s) {
  const OpenGraph& g = p.graph();
  std::vector<std::string> errors;
  auto fail = [&](std::size_t at, const std::string& what) {
    errors.push_back("instruction " + std::to_string(at) + ": " + what);
  };
  auto vs = [](Vertex v) { return "v" + std::to_string(v); };

  // Symbolic register state: which vertices have bit 1 written.
  std::set<Vertex> outcome_written;
  std::map<int, Vertex> slot_owner;
  std::map<Vertex, int> live;
  std::set<Vertex> prepared, measured, ever_allocated;
  std::set<Edge> fired;
  std::vector<Vertex> measure_sequence;

  const auto& ins = s.instructions;
  for (std::size_t i = 0; i < ins.size(); ++i) {
    const Instruction& x = ins[i];
    if (!g.contains(x.vertex)) {
      fail(i, "unknown vertex " + vs(x.vertex));
      continue;
    }
    switch (x.op) {
      case OpCode::kAlloc: {
        if (x.slot < 0 || x.slot >= s.slot_count)
          fail(i, "slot out of range");
        if (slot_owner.count(x.slot))
          fail(i, "slot q" + std::to_string(x.slot) + " already in use");
        if (!ever_allocated.insert(x.vertex).second)
          fail(i, vs(x.vertex) + " allocated twice");
        slot_owner[x.slot] = x.vertex;
        live[x.vertex] = x.slot;
        // laziness: the next instruction that is not an alloc/prep pair
        // must touch this vertex
        std::size_t k = i + 1;
        while (k < ins.size() &&
               (ins[k].op == OpCode::kPrep || ins[k].op == OpCode::kAlloc))
          ++k;
        bool used = k < ins.size() &&
                    ((ins[k].op == OpCode::kEntangle &&
                      (ins[k].vertex == x.vertex ||
                       ins[k].other == x.vertex)) ||
                     (ins[k].op == OpCode::kMeasure &&
                      ins[k].vertex == x.vertex));
        if (!used) fail(i, vs(x.vertex) + " allocated before it is needed");
        break;
      }
      case OpCode::kPrep:
        if (!live.count(x.vertex) || live[x.vertex] != x.slot)
          fail(i, "prep of " + vs(x.vertex) + " on a slot it does not own");
        if (!prepared.insert(x.vertex).second)
          fail(i, vs(x.vertex) + " prepared twice");
        break;
      case OpCode::kEntangle: {
        Edge e = make_edge(x.vertex, x.other);
        if (!g.adjacent(x.vertex, x.other))
          fail(i, "entangling non-edge");
        if (!fired.insert(e).second) fail(i, "edge applied twice");
        for (auto [v, q] : {std::pair{x.vertex, x.slot},
                            std::pair{x.other, x.other_slot}}) {
          if (!live.count(v) || live[v] != q)
            fail(i, "entangling " + vs(v) + " which is not live on q" +
                        std::to_string(q));
          if (!prepared.count(v)) fail(i, vs(v) + " entangled unprepared");
          if (measured.count(v)) fail(i, vs(v) + " entangled after measure");
        }
        if (x.slot == x.other_slot) fail(i, "slot collision");
        break;
      }
      case OpCode::kMeasure: {
        if (!live.count(x.vertex) || live[x.vertex] != x.slot)
          fail(i, "measuring " + vs(x.vertex) + " on a slot it does not own");
        for (Vertex u : g.neighbours(x.vertex))
          if (!fired.count(make_edge(x.vertex, u)))
            fail(i, vs(x.vertex) + " measured before edge with " + vs(u));
        // the measurement angle reads the corrections of its dependencies
        if (const Vertex* z = p.z_dependency(x.vertex))
          if (!outcome_written.count(*z))
            fail(i, "angle of " + vs(x.vertex) + " reads unwritten b of " +
                        vs(*z));
        for (Vertex u : p.x_dependencies(x.vertex))
          if (!outcome_written.count(u))
            fail(i, "angle of " + vs(x.vertex) + " reads unwritten b of " +
                        vs(u));
        if (!outcome_written.insert(x.vertex).second)
          fail(i, "b of " + vs(x.vertex) + " written twice");
        measured.insert(x.vertex);
        measure_sequence.push_back(x.vertex);
        break;
      }
      case OpCode::kFree:
        if (!live.count(x.vertex) || live[x.vertex] != x.slot)
          fail(i, "freeing a slot " + vs(x.vertex) + " does not own");
        if (!measured.count(x.vertex))
          fail(i, "freeing unmeasured " + vs(x.vertex));
        slot_owner.erase(x.slot);
        live.erase(x.vertex);
        break;
      case OpCode::kAccumulateZ:
      case OpCode::kAccumulateX:
        if (!outcome_written.count(x.other))
          fail(i, "correction reads unwritten b of " + vs(x.other));
        if (x.op == OpCode::kAccumulateZ) {
          auto f = p.flow().find(x.other);
          if (f == p.flow().end() || f->second != x.vertex)
            fail(i, "Z correction not sourced from the inverse flow");
        }
        if (measured.count(x.vertex))
          fail(i, "correction for already measured " + vs(x.vertex));
        break;
    }
  }

  std::vector<Vertex> expected = g.order();
  expected.insert(expected.end(), g.outputs().begin(), g.outputs().end());
  if (measure_sequence != expected)
    errors.push_back("measurements do not follow the pattern order");
  if (fired.size() != g.edges().size())
    errors.push_back("not every edge was applied");
  if (!live.empty()) errors.push_back("slots still allocated at the end");
  return errors;
}

}  // namespace vbqc
