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

#ifndef RVVSIM_ASM_PARSER_H_
#define RVVSIM_ASM_PARSER_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rvvsim/isa.h"

// Kernel files are line oriented:
//
//   # comment
//   .name   gemm_m2
//   .vtype  sew=8 lmul=2
//   loop:                        # optional label
//   vle8.v  v8,(x28)
//   ...
//   bne     x13,x15,0xffffffe6   # or "pc - 16", or "loop"
//
// The listing is one loop body: the single bne closing it must be the last
// instruction and must branch backwards to the first one. Branch offsets are
// checked for direction only; code layout is not modeled.

namespace rvvsim {

struct Program {
  std::string name;
  VType vtype;
  std::vector<Instruction> instructions;
  // Index of the closing bne, or -1 for an empty program.
  int loop_backedge = -1;
  std::map<std::string, int> labels;

  bool empty() const { return instructions.empty(); }

  bool operator==(const Program&) const = default;
};

struct ParseOptions {
  // Replaces the file's .vtype (used to evaluate a listing at another LMUL).
  std::optional<VType> vtype_override;
};

Program ParseProgram(std::string_view text, const ParseOptions& options = {});

// Operand list as the instruction would be written, e.g. "v0,x7,v8".
std::string RenderOperands(const Instruction& instr);

// Mnemonic padded to a fixed column followed by the operands; matches the
// "Instruction issued" column of the trace tables.
std::string RenderInstruction(const Instruction& instr);

// Canonical kernel text; ParseProgram(RenderProgram(p)) == p.
std::string RenderProgram(const Program& program);

}  // namespace rvvsim

#endif  // RVVSIM_ASM_PARSER_H_
