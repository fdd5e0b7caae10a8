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

#include "rvvsim/golden_exec.h"

#include <fmt/format.h>

#include "rvvsim/errors.h"

namespace rvvsim {
namespace {

std::int64_t SignExtend(std::uint64_t value, int bits) {
  const std::uint64_t mask = bits >= 64 ? ~0ULL : (1ULL << bits) - 1;
  value &= mask;
  const std::uint64_t sign = 1ULL << (bits - 1);
  return static_cast<std::int64_t>((value ^ sign) - sign);
}

std::int64_t ReadElement(std::span<const std::uint8_t> bytes, int index, int bits) {
  const int size = bits / 8;
  std::uint64_t raw = 0;
  for (int b = 0; b < size; ++b) {
    raw |= static_cast<std::uint64_t>(bytes[index * size + b]) << (8 * b);
  }
  return SignExtend(raw, bits);
}

void WriteElement(std::span<std::uint8_t> bytes, int index, int bits, std::int64_t value) {
  const int size = bits / 8;
  const auto raw = static_cast<std::uint64_t>(value);
  for (int b = 0; b < size; ++b) {
    bytes[index * size + b] = static_cast<std::uint8_t>(raw >> (8 * b));
  }
}

std::int64_t ImmediateValue(const Immediate& imm, const Bindings& bindings) {
  if (imm.symbol.empty()) return imm.value;
  const auto it = bindings.find(imm.symbol);
  return it == bindings.end() ? 0 : it->second;
}

void CheckGroup(const ArchState& state, const RegGroup& group) {
  if (group.base < 0 || group.end() > static_cast<int>(state.v.size())) {
    throw Error(ErrorKind::kExec,
                fmt::format("group {} is outside the {}-register file", group.ToString(),
                            state.v.size()));
  }
}

}  // namespace

ArchState ArchState::Create(const MachineConfig& config) {
  ArchState state;
  state.v.assign(config.num_vregs, std::vector<std::uint8_t>(config.vlen_bits / 8, 0));
  return state;
}

std::vector<std::uint8_t> ArchState::ReadGroup(const RegGroup& group) const {
  CheckGroup(*this, group);
  std::vector<std::uint8_t> bytes;
  for (int r = group.base; r < group.end(); ++r) {
    bytes.insert(bytes.end(), v[r].begin(), v[r].end());
  }
  return bytes;
}

void ArchState::WriteGroup(const RegGroup& group, std::span<const std::uint8_t> bytes) {
  CheckGroup(*this, group);
  size_t offset = 0;
  for (int r = group.base; r < group.end(); ++r) {
    for (auto& byte : v[r]) byte = offset < bytes.size() ? bytes[offset++] : 0;
  }
}

void ArchState::WriteMemory(std::uint32_t addr, std::span<const std::uint8_t> bytes) {
  for (size_t i = 0; i < bytes.size(); ++i) {
    memory[static_cast<std::uint32_t>(addr + i)] = bytes[i];
  }
}

std::vector<std::uint8_t> ArchState::ReadMemory(std::uint32_t addr, std::uint32_t size) const {
  std::vector<std::uint8_t> bytes(size);
  for (std::uint32_t i = 0; i < size; ++i) {
    const auto it = memory.find(addr + i);
    if (it == memory.end()) {
      throw Error(ErrorKind::kExec,
                  fmt::format("load from uninitialized memory at 0x{:08x}", addr + i));
    }
    bytes[i] = it->second;
  }
  return bytes;
}

void StepInPlace(ArchState& state, const Instruction& instr, const VType& vtype,
                 const MachineConfig& config, const Bindings& bindings) {
  const OpcodeInfo& info = Info(instr.opcode);
  const int vlmax = vtype.Elements(config);
  const int sew = vtype.sew_bits;
  int next_pc = state.pc + 1;

  switch (instr.opcode) {
    case Opcode::kVle8:
    case Opcode::kVle16:
    case Opcode::kVl2re16:
    case Opcode::kVl4re16: {
      const RegGroup& dest = *instr.vector_dest();
      const std::uint32_t addr = state.ReadX(instr.addr_base->index);
      const int eew_bytes = info.load_eew / 8;
      if (addr % eew_bytes != 0) {
        throw Error(ErrorKind::kExec,
                    fmt::format("{} address 0x{:08x} is not {}-byte aligned", info.mnemonic,
                                addr, eew_bytes));
      }
      const std::uint32_t size =
          info.whole_regs > 0 ? info.whole_regs * config.vlen_bits / 8 : vlmax * eew_bytes;
      state.WriteGroup(dest, state.ReadMemory(addr, size));
      break;
    }
    case Opcode::kVwmaccVx:
    case Opcode::kVwmaccVv:
    case Opcode::kVwaddWv: {
      const RegGroup& dest = *instr.vector_dest();
      std::vector<std::uint8_t> result = state.ReadGroup(dest);
      if (instr.opcode == Opcode::kVwaddWv) {
        const auto wide = state.ReadGroup(std::get<RegGroup>(instr.sources[0]));
        const auto narrow = state.ReadGroup(std::get<RegGroup>(instr.sources[1]));
        for (int i = 0; i < vlmax; ++i) {
          WriteElement(result, i, 2 * sew,
                       ReadElement(wide, i, 2 * sew) + ReadElement(narrow, i, sew));
        }
      } else {
        std::vector<std::uint8_t> lhs;
        std::int64_t scalar = 0;
        const bool vx = instr.opcode == Opcode::kVwmaccVx;
        if (vx) {
          // Low SEW bits of x[rs1], sign-extended.
          scalar = SignExtend(state.ReadX(std::get<ScalarReg>(instr.sources[0]).index), sew);
        } else {
          lhs = state.ReadGroup(std::get<RegGroup>(instr.sources[0]));
        }
        const auto rhs = state.ReadGroup(std::get<RegGroup>(instr.sources[1]));
        for (int i = 0; i < vlmax; ++i) {
          const std::int64_t a = vx ? scalar : ReadElement(lhs, i, sew);
          const std::int64_t product = a * ReadElement(rhs, i, sew);
          WriteElement(result, i, 2 * sew, ReadElement(result, i, 2 * sew) + product);
        }
      }
      state.WriteGroup(dest, result);
      break;
    }
    case Opcode::kLb:
    case Opcode::kLbu:
    case Opcode::kLh: {
      const std::int64_t offset =
          instr.addr_offset ? ImmediateValue(*instr.addr_offset, bindings) : 0;
      const auto addr =
          static_cast<std::uint32_t>(state.ReadX(instr.addr_base->index) + offset);
      const int size = instr.opcode == Opcode::kLh ? 2 : 1;
      const auto bytes = state.ReadMemory(addr, size);
      std::uint32_t raw = bytes[0] | (size == 2 ? bytes[1] << 8 : 0);
      std::uint32_t value = raw;
      if (instr.opcode != Opcode::kLbu) {
        value = static_cast<std::uint32_t>(SignExtend(raw, 8 * size));
      }
      state.WriteX(instr.scalar_dest()->index, value);
      break;
    }
    case Opcode::kAddi: {
      const auto rs1 = state.ReadX(std::get<ScalarReg>(instr.sources[0]).index);
      const auto imm = ImmediateValue(std::get<Immediate>(instr.sources[1]), bindings);
      state.WriteX(instr.scalar_dest()->index, static_cast<std::uint32_t>(rs1 + imm));
      break;
    }
    case Opcode::kCAddi: {
      const int rd = instr.scalar_dest()->index;
      const auto imm = ImmediateValue(std::get<Immediate>(instr.sources[0]), bindings);
      state.WriteX(rd, static_cast<std::uint32_t>(state.ReadX(rd) + imm));
      break;
    }
    case Opcode::kBne: {
      const auto a = state.ReadX(std::get<ScalarReg>(instr.sources[0]).index);
      const auto b = state.ReadX(std::get<ScalarReg>(instr.sources[1]).index);
      if (a != b) next_pc = 0;
      break;
    }
  }
  state.pc = next_pc;
}

ArchState Step(ArchState state, const Instruction& instr, const VType& vtype,
               const MachineConfig& config, const Bindings& bindings) {
  StepInPlace(state, instr, vtype, config, bindings);
  return state;
}

ArchState Run(const Program& program, const MachineConfig& config, ArchState init,
              std::int64_t max_steps, const Bindings& bindings) {
  const int size = static_cast<int>(program.instructions.size());
  std::int64_t steps = 0;
  while (init.pc >= 0 && init.pc < size) {
    if (steps++ >= max_steps) {
      throw Error(ErrorKind::kExec,
                  fmt::format("runaway loop: {} steps executed without leaving the loop",
                              max_steps));
    }
    StepInPlace(init, program.instructions[init.pc], program.vtype, config, bindings);
  }
  return init;
}

void LoadMemoryImageJson(ArchState& state, std::string_view json_text) {
  nlohmann::json image;
  try {
    image = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, fmt::format("memory image: {}", e.what()));
  }
  auto load_run = [&state](const nlohmann::json& run, std::uint32_t addr) {
    const auto& bytes = run.at("bytes");
    std::vector<std::uint8_t> data;
    if (bytes.is_string()) {
      const std::string hex = bytes.get<std::string>();
      if (hex.size() % 2 != 0) throw Error(ErrorKind::kParse, "memory image: odd hex length");
      for (size_t i = 0; i < hex.size(); i += 2) {
        data.push_back(static_cast<std::uint8_t>(std::stoul(hex.substr(i, 2), nullptr, 16)));
      }
    } else {
      for (const auto& b : bytes) {
        if (!b.is_number_unsigned() || b.get<std::uint64_t>() > 0xff) {
          throw Error(ErrorKind::kParse, fmt::format("memory image: bad byte {}", b.dump()));
        }
        data.push_back(b.get<std::uint8_t>());
      }
    }
    state.WriteMemory(addr, data);
  };
  try {
    if (image.contains("runs")) {
      for (const auto& run : image.at("runs")) load_run(run, run.at("addr").get<std::uint32_t>());
    } else {
      load_run(image, image.at("base").get<std::uint32_t>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, fmt::format("memory image: {}", e.what()));
  } catch (const std::invalid_argument&) {
    throw Error(ErrorKind::kParse, "memory image: bad hex byte");
  }
}

void LoadMemoryImageBinary(ArchState& state, std::span<const std::uint8_t> bytes,
                           std::uint32_t base) {
  state.WriteMemory(base, bytes);
}

nlohmann::json StateToJson(const ArchState& state) {
  nlohmann::json x = nlohmann::json::object();
  for (int r = 1; r < kNumScalarRegs; ++r) {
    if (state.x[r] != 0) x[ScalarRegName(r)] = state.x[r];
  }
  nlohmann::json v = nlohmann::json::object();
  for (size_t r = 0; r < state.v.size(); ++r) {
    std::string hex;
    for (auto byte : state.v[r]) hex += fmt::format("{:02x}", byte);
    v[fmt::format("v{}", r)] = hex;
  }
  return {{"pc", state.pc}, {"x", x}, {"v", v}};
}

std::string RenderState(const ArchState& state) {
  std::string out = fmt::format("pc  {}\n", state.pc);
  for (int r = 1; r < kNumScalarRegs; ++r) {
    if (state.x[r] != 0) out += fmt::format("{:<4}0x{:08x}\n", ScalarRegName(r), state.x[r]);
  }
  for (size_t r = 0; r < state.v.size(); ++r) {
    std::string hex;
    // Most significant byte first, the usual register dump order.
    for (auto it = state.v[r].rbegin(); it != state.v[r].rend(); ++it) {
      hex += fmt::format("{:02x}", *it);
    }
    out += fmt::format("{:<4}0x{}\n", fmt::format("v{}", r), hex);
  }
  return out;
}

}  // namespace rvvsim
