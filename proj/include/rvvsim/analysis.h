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

#ifndef RVVSIM_ANALYSIS_H_
#define RVVSIM_ANALYSIS_H_

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rvvsim/asm_parser.h"
#include "rvvsim/isa.h"

namespace rvvsim {

struct Trace;

inline constexpr int kRegisterFileSizes[] = {8, 16, 32};

struct UnitUsage {
  UnitClass unit = UnitClass::kVectorMac;
  int busy_cycles = 0;
  Rational utilization;
};

struct UtilizationReport {
  std::string kernel;
  int lmul = 1;
  int steady_period = 0;
  int warmup_cycles = 0;
  std::vector<UnitUsage> units;  // vector units used by the kernel
  int vregs_used = 0;
  Rational chaining_ratio;
  std::map<int, bool> fits;  // keyed by register file size

  const UnitUsage* Find(UnitClass unit) const;
};

// Cycles of the steady window in which `unit` is active: writing back or
// mid-occupancy for vector units, issuing for scalar ones.
int BusyCycles(const Trace& trace, UnitClass unit);

// BusyCycles / steady_period. Throws Error(kNotConverged) without a steady
// state.
Rational Utilization(const Trace& trace, UnitClass unit);

// Distinct vector registers named by the program after group expansion.
int VregPressure(const Program& program);

struct FitViolation {
  int instruction = 0;
  RegGroup group;
  std::string message;
};

// Empty when every group is aligned and ends at or below num_vregs.
std::vector<FitViolation> FitCheck(const Program& program, int num_vregs);

struct RemapResult {
  Program program;
  // Old register -> new register, for every register the program touches.
  std::map<int, int> register_map;
  bool changed = false;
};

// Renumbers register groups to minimize the highest register used, keeping
// group widths, alignment and internal overlap. Every group is treated as
// live across the whole loop, so distinct groups never share registers.
// Returns the input unchanged when it is already minimally packed. Throws
// Error(kInfeasible) naming the binding constraint when the result cannot
// fit num_vregs.
RemapResult Remap(const Program& program, int num_vregs);

UtilizationReport Analyze(const Program& program, const MachineConfig& config,
                          int iterations);

// Integer percent, rounding halves up: 8/9 -> "89".
std::string RenderPercent(const Rational& fraction);
std::string RenderRational(const Rational& value);

std::string RenderReportTable(const UtilizationReport& report);
nlohmann::json ReportToJson(const UtilizationReport& report);

}  // namespace rvvsim

#endif  // RVVSIM_ANALYSIS_H_
