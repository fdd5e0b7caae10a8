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

#ifndef RVVSIM_GOLDEN_EXEC_H_
#define RVVSIM_GOLDEN_EXEC_H_

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rvvsim/asm_parser.h"
#include "rvvsim/isa.h"

// Untimed architectural model of the kernel vocabulary. Used as the
// correctness oracle for the corpus kernels and for register remapping.

namespace rvvsim {

// Values for named immediates such as the N in "lb x7,N(x5)". Unbound
// names read as 0.
using Bindings = std::map<std::string, std::int64_t>;

struct ArchState {
  std::array<std::uint32_t, kNumScalarRegs> x{};
  // num_vregs registers of vlen_bits / 8 bytes each.
  std::vector<std::vector<std::uint8_t>> v;
  // Sparse, little-endian; absent bytes are uninitialized.
  std::map<std::uint32_t, std::uint8_t> memory;
  int pc = 0;

  static ArchState Create(const MachineConfig& config);

  std::uint32_t ReadX(int reg) const { return reg == 0 ? 0 : x[reg]; }
  void WriteX(int reg, std::uint32_t value) {
    if (reg != 0) x[reg] = value;
  }

  std::vector<std::uint8_t> ReadGroup(const RegGroup& group) const;
  void WriteGroup(const RegGroup& group, std::span<const std::uint8_t> bytes);

  void WriteMemory(std::uint32_t addr, std::span<const std::uint8_t> bytes);
  // Throws Error(kExec) on an uninitialized byte.
  std::vector<std::uint8_t> ReadMemory(std::uint32_t addr, std::uint32_t size) const;

  bool operator==(const ArchState&) const = default;
};

// Executes one instruction and advances pc. bne redirects to the loop head.
ArchState Step(ArchState state, const Instruction& instr, const VType& vtype,
               const MachineConfig& config, const Bindings& bindings = {});
void StepInPlace(ArchState& state, const Instruction& instr, const VType& vtype,
                 const MachineConfig& config, const Bindings& bindings = {});

// Steps from init.pc until control leaves the loop. Throws Error(kExec) when
// max_steps instructions have executed without the loop exiting.
ArchState Run(const Program& program, const MachineConfig& config, ArchState init,
              std::int64_t max_steps, const Bindings& bindings = {});

// {"runs": [{"addr": 4096, "bytes": [1, 2, ...] or "0102..."}]} or the
// single-run shorthand {"base": 4096, "bytes": ...}.
void LoadMemoryImageJson(ArchState& state, std::string_view json_text);
void LoadMemoryImageBinary(ArchState& state, std::span<const std::uint8_t> bytes,
                           std::uint32_t base);

nlohmann::json StateToJson(const ArchState& state);
std::string RenderState(const ArchState& state);

}  // namespace rvvsim

#endif  // RVVSIM_GOLDEN_EXEC_H_
