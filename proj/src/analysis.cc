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

#include "rvvsim/analysis.h"

#include <algorithm>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "rvvsim/errors.h"
#include "rvvsim/timing_sim.h"

namespace rvvsim {

const UnitUsage* UtilizationReport::Find(UnitClass unit) const {
  for (const auto& u : units) {
    if (u.unit == unit) return &u;
  }
  return nullptr;
}

int BusyCycles(const Trace& trace, UnitClass unit) {
  int busy = 0;
  for (const auto& row : trace.SteadyWindow()) {
    const bool active = IsVectorUnit(unit) ? row.HasWrites(unit) : row.issue_unit == unit;
    if (active) ++busy;
  }
  return busy;
}

Rational Utilization(const Trace& trace, UnitClass unit) {
  if (trace.steady_period <= 0) {
    throw Error(ErrorKind::kNotConverged, "trace has no steady state");
  }
  return Rational(BusyCycles(trace, unit), trace.steady_period);
}

int VregPressure(const Program& program) {
  std::set<int> regs;
  for (const auto& instr : program.instructions) {
    for (const RegGroup& g : instr.VectorGroups()) {
      for (int r = g.base; r < g.end(); ++r) regs.insert(r);
    }
  }
  return static_cast<int>(regs.size());
}

std::vector<FitViolation> FitCheck(const Program& program, int num_vregs) {
  std::vector<FitViolation> violations;
  for (size_t i = 0; i < program.instructions.size(); ++i) {
    const Instruction& instr = program.instructions[i];
    std::vector<RegGroup> seen;
    for (const RegGroup& g : instr.VectorGroups()) {
      if (std::find(seen.begin(), seen.end(), g) != seen.end()) continue;
      seen.push_back(g);
      const std::string where =
          fmt::format("instruction {} '{} {}'", i, instr.mnemonic(), RenderOperands(instr));
      if (!g.aligned()) {
        violations.push_back({static_cast<int>(i), g,
                              fmt::format("{}: group {} is not aligned to its width {}",
                                          where, g.ToString(), g.width)});
      } else if (g.end() > num_vregs) {
        violations.push_back(
            {static_cast<int>(i), g,
             fmt::format("{}: group {} does not fit {} vector registers", where,
                         g.ToString(), num_vregs)});
      }
    }
  }
  return violations;
}

namespace {

// Groups that overlap each other move together as one block.
struct Block {
  int min_base = 0;
  int span = 0;
  int align = 1;
  std::set<int> registers;
};

std::vector<Block> BuildBlocks(const Program& program) {
  std::vector<RegGroup> groups;
  for (const auto& instr : program.instructions) {
    for (const RegGroup& g : instr.VectorGroups()) {
      if (std::find(groups.begin(), groups.end(), g) == groups.end()) groups.push_back(g);
    }
  }
  std::vector<int> parent(groups.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (size_t a = 0; a < groups.size(); ++a) {
    for (size_t b = a + 1; b < groups.size(); ++b) {
      if (groups[a].Overlaps(groups[b])) parent[find(a)] = find(b);
    }
  }
  std::map<int, Block> by_root;
  for (size_t i = 0; i < groups.size(); ++i) {
    Block& block = by_root[find(static_cast<int>(i))];
    const RegGroup& g = groups[i];
    for (int r = g.base; r < g.end(); ++r) block.registers.insert(r);
    block.align = std::max(block.align, g.width);
  }
  std::vector<Block> blocks;
  for (auto& [root, block] : by_root) {
    block.min_base = *block.registers.begin();
    block.span = *block.registers.rbegin() + 1 - block.min_base;
    blocks.push_back(std::move(block));
  }
  std::sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) {
    if (a.align != b.align) return a.align > b.align;
    if (a.span != b.span) return a.span > b.span;
    return a.min_base < b.min_base;
  });
  return blocks;
}

// Exhaustive placement of blocks below `limit`. A block keeps its internal
// layout, so its new base must stay congruent to the old one modulo its
// widest member.
bool Place(const std::vector<Block>& blocks, size_t i, int limit,
           std::vector<int>& bases, std::vector<bool>& used) {
  if (i == blocks.size()) return true;
  const Block& block = blocks[i];
  for (int base = block.min_base % block.align; base + block.span <= limit;
       base += block.align) {
    bool free = true;
    for (int r : block.registers) {
      if (used[base + r - block.min_base]) {
        free = false;
        break;
      }
    }
    if (!free) continue;
    for (int r : block.registers) used[base + r - block.min_base] = true;
    bases[i] = base;
    if (Place(blocks, i + 1, limit, bases, used)) return true;
    for (int r : block.registers) used[base + r - block.min_base] = false;
  }
  return false;
}

}  // namespace

RemapResult Remap(const Program& program, int num_vregs) {
  const int pressure = VregPressure(program);
  if (pressure > num_vregs) {
    throw Error(ErrorKind::kInfeasible,
                fmt::format("register pressure {} > {}", pressure, num_vregs));
  }

  const std::vector<Block> blocks = BuildBlocks(program);
  int original_end = 0;
  for (const Block& b : blocks) original_end = std::max(original_end, b.min_base + b.span);

  std::vector<int> bases(blocks.size(), 0);
  int best = -1;
  for (int limit = pressure; limit <= kMaxVectorRegs; ++limit) {
    std::vector<bool> used(kMaxVectorRegs, false);
    if (Place(blocks, 0, limit, bases, used)) {
      best = limit;
      break;
    }
  }

  RemapResult result;
  result.program = program;
  if (best < 0 || best >= original_end) {
    if (original_end > num_vregs) {
      throw Error(ErrorKind::kInfeasible,
                  fmt::format("group alignment needs {} registers > {}",
                              best < 0 ? original_end : best, num_vregs));
    }
    for (const Block& b : blocks) {
      for (int r : b.registers) result.register_map[r] = r;
    }
    return result;
  }
  if (best > num_vregs) {
    throw Error(ErrorKind::kInfeasible,
                fmt::format("group alignment needs {} registers > {}", best, num_vregs));
  }

  for (size_t i = 0; i < blocks.size(); ++i) {
    for (int r : blocks[i].registers) {
      result.register_map[r] = bases[i] + r - blocks[i].min_base;
    }
  }
  auto rename = [&](RegGroup& g) { g.base = result.register_map.at(g.base); };
  for (Instruction& instr : result.program.instructions) {
    if (auto* d = std::get_if<RegGroup>(&instr.dest)) rename(*d);
    for (Operand& op : instr.sources) {
      if (auto* g = std::get_if<RegGroup>(&op)) rename(*g);
    }
  }
  result.changed = result.program != program;
  return result;
}

UtilizationReport Analyze(const Program& program, const MachineConfig& config,
                          int iterations) {
  const Trace trace = Simulate(program, config, iterations);
  UtilizationReport report;
  report.kernel = program.name;
  report.lmul = program.vtype.lmul;
  report.steady_period = trace.steady_period;
  report.warmup_cycles = trace.warmup_cycles;
  for (UnitClass unit : trace.vector_units) {
    report.units.push_back({unit, BusyCycles(trace, unit), Utilization(trace, unit)});
  }
  report.vregs_used = VregPressure(program);
  report.chaining_ratio = ChainingRatio(program.vtype.lmul, config);
  for (int size : kRegisterFileSizes) report.fits[size] = FitCheck(program, size).empty();
  return report;
}

std::string RenderPercent(const Rational& fraction) {
  const std::int64_t num = fraction.numerator();
  const std::int64_t den = fraction.denominator();
  return fmt::format("{}", (200 * num + den) / (2 * den));
}

std::string RenderRational(const Rational& value) {
  if (value.denominator() == 1) return fmt::format("{}", value.numerator());
  return fmt::format("{}/{}", value.numerator(), value.denominator());
}

std::string RenderReportTable(const UtilizationReport& report) {
  std::string out;
  out += fmt::format("{:<16}{}\n", "kernel", report.kernel);
  out += fmt::format("{:<16}{}\n", "lmul", report.lmul);
  out += fmt::format("{:<16}{} cycles (warmup {})\n", "steady period", report.steady_period,
                     report.warmup_cycles);
  for (const auto& u : report.units) {
    out += fmt::format("{:<16}{} of {} cycles = {} ({}%)\n", UnitName(u.unit), u.busy_cycles,
                       report.steady_period, RenderRational(u.utilization),
                       RenderPercent(u.utilization));
  }
  out += fmt::format("{:<16}{}\n", "vregs used", report.vregs_used);
  out += fmt::format("{:<16}1:{}\n", "chaining ratio", RenderRational(report.chaining_ratio));
  std::string fits;
  for (const auto& [size, ok] : report.fits) {
    fits += fmt::format("{}{}: {}", fits.empty() ? "" : "  ", size, ok ? "yes" : "no");
  }
  out += fmt::format("{:<16}{}\n", "fits", fits);
  return out;
}

nlohmann::json ReportToJson(const UtilizationReport& report) {
  nlohmann::json units = nlohmann::json::array();
  for (const auto& u : report.units) {
    units.push_back({{"unit", UnitName(u.unit)},
                     {"id", UnitId(u.unit)},
                     {"busy_cycles", u.busy_cycles},
                     {"utilization", RenderRational(u.utilization)},
                     {"percent", std::stoi(RenderPercent(u.utilization))}});
  }
  nlohmann::json fits = nlohmann::json::object();
  for (const auto& [size, ok] : report.fits) fits[std::to_string(size)] = ok;
  return {{"kernel", report.kernel},
          {"lmul", report.lmul},
          {"steady_period", report.steady_period},
          {"warmup_cycles", report.warmup_cycles},
          {"units", units},
          {"vregs_used", report.vregs_used},
          {"chaining_ratio", RenderRational(report.chaining_ratio)},
          {"fits", fits}};
}

}  // namespace rvvsim
