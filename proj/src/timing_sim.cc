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

#include "rvvsim/timing_sim.h"

#include <algorithm>
#include <array>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "rvvsim/analysis.h"
#include "rvvsim/errors.h"

namespace rvvsim {
namespace {

// Consecutive stall cycles, beyond the longest configured offset, after
// which issue is declared deadlocked.
constexpr int kStallLimit = 4096;
constexpr int kNeverWritten = std::numeric_limits<int>::min();

int UnitRank(UnitClass unit) {
  for (size_t i = 0; i < std::size(kVectorUnits); ++i) {
    if (kVectorUnits[i] == unit) return static_cast<int>(i);
  }
  return static_cast<int>(std::size(kVectorUnits));
}

struct Interval {
  int begin;
  int end;  // exclusive
};

// Scoreboard for one simulation run: scalar readiness, per-chunk write
// cycles, unit reservations and the writebacks still in flight.
class Scoreboard {
 public:
  Scoreboard(const VType& vtype, const MachineConfig& config)
      : vtype_(vtype),
        config_(config),
        chunk_ready_(config.num_vregs,
                     std::vector<int>(config.chunks_per_reg(), kNeverWritten)) {
    scalar_ready_.fill(0);
  }

  // Describes the first hazard that blocks `instr` at cycle t, if any.
  std::optional<std::string> Hazard(const Instruction& instr, int t) const {
    for (int reg : instr.ScalarReads()) {
      if (reg != 0 && scalar_ready_[reg] > t) {
        return fmt::format("scalar RAW on {} (ready at cycle {})", ScalarRegName(reg),
                           scalar_ready_[reg]);
      }
    }
    if (!instr.IsVector()) return std::nullopt;

    const UnitClass unit = instr.unit();
    const int first = t + config_.FirstChunkOffset(unit);
    const int occupancy = OccupancyCycles(instr, vtype_, config_);
    const auto busy = busy_.find(unit);
    if (busy != busy_.end()) {
      for (const Interval& r : busy->second) {
        if (first < r.end && r.begin < first + occupancy) {
          return fmt::format("structural hazard on {} (busy until cycle {})",
                             UnitName(unit), r.end - 1);
        }
      }
    }

    const int cpr = config_.chunks_per_reg();
    const int out_chunks = OutputChunks(instr, vtype_, config_);
    const int per_cycle = config_.ChunksPerCycle(unit);
    for (const RegGroup& group : instr.VectorReads()) {
      for (int j = 0; j < group.width * cpr; ++j) {
        const int reg = group.base + j / cpr;
        const int chunk = j % cpr;
        const int use = first + std::min(j, out_chunks - 1) / per_cycle;
        if (chunk_ready_[reg][chunk] > use) {
          return fmt::format("vector RAW on v{}:{} (written at cycle {}, needed by {})",
                             reg, chunk, chunk_ready_[reg][chunk], use);
        }
      }
    }
    return std::nullopt;
  }

  void Issue(const Instruction& instr, int t) {
    if (const ScalarReg* dest = instr.scalar_dest(); dest && dest->index != 0) {
      scalar_ready_[dest->index] =
          t + (instr.unit() == UnitClass::kScalarLoad ? config_.scalar_load_latency : 1);
    }
    if (!instr.IsVector()) return;

    const UnitClass unit = instr.unit();
    const int first = t + config_.FirstChunkOffset(unit);
    const int per_cycle = config_.ChunksPerCycle(unit);
    const int cpr = config_.chunks_per_reg();
    const RegGroup& dest = *instr.vector_dest();
    const int chunks = OutputChunks(instr, vtype_, config_);
    for (int k = 0; k < chunks; ++k) {
      const int cycle = first + k / per_cycle;
      const int reg = dest.base + k / cpr;
      pending_[cycle].push_back(ChunkWrite{reg, k % cpr, unit});
      chunk_ready_[reg][k % cpr] = cycle;
    }
    auto& reservations = busy_[unit];
    std::erase_if(reservations, [t](const Interval& r) { return r.end <= t; });
    reservations.push_back({first, first + OccupancyCycles(instr, vtype_, config_)});
  }

  std::vector<ChunkWrite> TakeWrites(int cycle) {
    std::vector<ChunkWrite> writes;
    if (auto it = pending_.find(cycle); it != pending_.end()) {
      writes = std::move(it->second);
      pending_.erase(it);
    }
    std::stable_sort(writes.begin(), writes.end(), [](const ChunkWrite& a, const ChunkWrite& b) {
      if (UnitRank(a.unit) != UnitRank(b.unit)) return UnitRank(a.unit) < UnitRank(b.unit);
      if (a.vreg != b.vreg) return a.vreg < b.vreg;
      return a.chunk < b.chunk;
    });
    return writes;
  }

  bool drained() const { return pending_.empty(); }

 private:
  const VType& vtype_;
  const MachineConfig& config_;
  std::array<int, kNumScalarRegs> scalar_ready_;
  std::vector<std::vector<int>> chunk_ready_;
  std::map<UnitClass, std::vector<Interval>> busy_;
  std::map<int, std::vector<ChunkWrite>> pending_;
};

}  // namespace

std::vector<ChunkWrite> TraceRow::WritesBy(UnitClass unit) const {
  std::vector<ChunkWrite> out;
  for (const auto& w : writes) {
    if (w.unit == unit) out.push_back(w);
  }
  return out;
}

bool TraceRow::HasWrites(UnitClass unit) const {
  return std::any_of(writes.begin(), writes.end(),
                     [unit](const ChunkWrite& w) { return w.unit == unit; });
}

int Trace::IterationsPerPeriod() const {
  int count = 0;
  for (const auto& row : SteadyWindow()) {
    if (row.issued && row.issued->index == 0) ++count;
  }
  return count;
}

Trace Simulate(const Program& program, const MachineConfig& config, int iterations) {
  config.Validate();
  if (config.issue_width != 1) {
    throw Error(ErrorKind::kConfig,
                fmt::format("issue_width={} is not modeled; only single issue is supported",
                            config.issue_width));
  }
  program.vtype.Validate(config);
  if (iterations < 3) {
    throw Error(ErrorKind::kUsage,
                fmt::format("at least 3 iterations are needed, got {}", iterations));
  }
  if (const auto violations = FitCheck(program, config.num_vregs); !violations.empty()) {
    throw Error(ErrorKind::kFit, violations.front().message);
  }

  Trace trace;
  trace.config = config;
  trace.program_name = program.name;
  trace.vtype = program.vtype;
  trace.iterations = iterations;
  for (UnitClass unit : kVectorUnits) {
    const bool used = std::any_of(program.instructions.begin(), program.instructions.end(),
                                  [unit](const Instruction& i) { return i.unit() == unit; });
    if (used) trace.vector_units.push_back(unit);
  }
  if (program.empty()) return trace;

  std::vector<std::string> rendered;
  for (const auto& instr : program.instructions) rendered.push_back(RenderInstruction(instr));

  Scoreboard scoreboard(program.vtype, config);
  const int stall_limit =
      kStallLimit + config.scalar_load_latency +
      std::max({config.load_first_chunk_offset, config.alu_first_chunk_offset,
                config.mac_first_chunk_offset});
  const int body = static_cast<int>(program.instructions.size());
  int next = 0;
  int iteration = 0;
  int stalled = 0;
  for (int t = 0; iteration < iterations || !scoreboard.drained(); ++t) {
    TraceRow row;
    row.cycle = t;
    if (iteration < iterations) {
      const Instruction& instr = program.instructions[next];
      if (const auto hazard = scoreboard.Hazard(instr, t)) {
        if (++stalled > stall_limit) {
          throw Error(ErrorKind::kDeadlock,
                      fmt::format("deadlock at cycle {}: '{}' blocked by {}", t,
                                  rendered[next], *hazard));
        }
      } else {
        stalled = 0;
        scoreboard.Issue(instr, t);
        row.issued = IssueSlot{next, rendered[next]};
        row.issue_unit = instr.unit();
        if (++next == body) {
          next = 0;
          ++iteration;
        }
      }
    }
    row.writes = scoreboard.TakeWrites(t);
    trace.rows.push_back(std::move(row));
  }

  const SteadyState steady = DetectSteadyState(trace.rows);
  trace.warmup_cycles = steady.warmup_cycles;
  trace.steady_period = steady.steady_period;
  trace.window_start = steady.warmup_cycles;
  while (!(trace.rows[trace.window_start].issued &&
           trace.rows[trace.window_start].issued->index == 0)) {
    ++trace.window_start;
  }
  return trace;
}

SteadyState DetectSteadyState(std::span<const TraceRow> rows) {
  int horizon = -1;
  for (int i = static_cast<int>(rows.size()) - 1; i >= 0; --i) {
    if (rows[i].issued && rows[i].issued->index == 0) {
      horizon = i;
      break;
    }
  }
  if (horizon < 0) return {};

  for (int period = 1; 2 * period <= horizon; ++period) {
    int i = horizon - period - 1;
    while (i >= 0 && rows[i].SameShape(rows[i + period])) --i;
    const int warmup = i + 1;
    if (horizon - warmup >= 2 * period) return {warmup, period};
  }
  throw Error(ErrorKind::kNotConverged,
              fmt::format("no steady state within {} cycles; simulate more iterations",
                          horizon));
}

}  // namespace rvvsim
