// Copyright 2026 The rvvsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RVVSIM_TIMING_SIM_H_
#define RVVSIM_TIMING_SIM_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rvvsim/asm_parser.h"
#include "rvvsim/isa.h"

namespace rvvsim {

struct IssueSlot {
  int index = 0;     // position in the loop body
  std::string text;  // rendered instruction

  bool operator==(const IssueSlot&) const = default;
};

struct TraceRow {
  int cycle = 0;
  // Empty on a stall cycle.
  std::optional<IssueSlot> issued;
  std::optional<UnitClass> issue_unit;
  // Grouped by unit in kVectorUnits order; within a unit ascending register,
  // then ascending chunk.
  std::vector<ChunkWrite> writes;

  std::vector<ChunkWrite> WritesBy(UnitClass unit) const;
  bool HasWrites(UnitClass unit) const;
  // Row equality ignoring the absolute cycle number.
  bool SameShape(const TraceRow& other) const {
    return issued == other.issued && issue_unit == other.issue_unit &&
           writes == other.writes;
  }
};

struct SteadyState {
  int warmup_cycles = 0;
  int steady_period = 0;
};

struct Trace {
  MachineConfig config;
  std::string program_name;
  VType vtype;
  int iterations = 0;
  // Vector units the program uses, in kVectorUnits order (trace columns).
  std::vector<UnitClass> vector_units;
  std::vector<TraceRow> rows;
  int warmup_cycles = 0;
  int steady_period = 0;
  // First loop-head issue at or after the warmup; the rendered window.
  int window_start = 0;

  std::span<const TraceRow> SteadyWindow() const {
    return std::span<const TraceRow>(rows).subspan(window_start, steady_period);
  }
  // Loop iterations that start inside the steady window.
  int IterationsPerPeriod() const;
};

// In-order single-issue execution of `iterations` back-to-back loop
// iterations. Each cycle the oldest unissued instruction issues unless
//   - its unit is busy during any cycle it would write (structural),
//   - a scalar source is not ready (loads: scalar_load_latency, ALU: 1),
//   - some source chunk j is written later than the instruction's own
//     chunk-position j writeback (chunk-granular chaining; the MAC
//     accumulator counts as a source).
// A vector instruction issued at t writes chunk k at
//   t + first_chunk_offset(unit) + k / chunks_per_cycle(unit).
// Throws Error(kFit) if a group exceeds config.num_vregs, Error(kDeadlock)
// if issue stalls without bound and Error(kNotConverged) if no steady state
// is found.
Trace Simulate(const Program& program, const MachineConfig& config, int iterations);

// Smallest period, then smallest warmup, such that rows repeat (ignoring
// cycle numbers) up to the last loop-head issue. The drain after that issue
// is excluded. Requires two full periods of agreement.
SteadyState DetectSteadyState(std::span<const TraceRow> rows);

}  // namespace rvvsim

#endif  // RVVSIM_TIMING_SIM_H_
