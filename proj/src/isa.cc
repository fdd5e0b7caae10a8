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

#include "rvvsim/isa.h"

#include <array>
#include <bit>
#include <charconv>

#include <fmt/format.h>

#include "rvvsim/errors.h"

namespace rvvsim {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage: return "usage";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kInvalidGrouping: return "invalid-grouping";
    case ErrorKind::kFit: return "fit";
    case ErrorKind::kInfeasible: return "infeasible";
    case ErrorKind::kDeadlock: return "deadlock";
    case ErrorKind::kNotConverged: return "not-converged";
    case ErrorKind::kExec: return "exec";
    case ErrorKind::kOracleMismatch: return "oracle-mismatch";
    case ErrorKind::kUnknownKernel: return "unknown-kernel";
  }
  return "unknown";
}

bool IsVectorUnit(UnitClass unit) {
  return unit == UnitClass::kVectorLoad || unit == UnitClass::kVectorAlu ||
         unit == UnitClass::kVectorMac;
}

std::string_view UnitName(UnitClass unit) {
  switch (unit) {
    case UnitClass::kVectorLoad: return "VLOAD";
    case UnitClass::kVectorAlu: return "ALU";
    case UnitClass::kVectorMac: return "VMAC";
    default: return "Scalar";
  }
}

char UnitTag(UnitClass unit) {
  switch (unit) {
    case UnitClass::kVectorLoad: return 'L';
    case UnitClass::kVectorAlu: return 'A';
    case UnitClass::kVectorMac: return 'M';
    default: return 'S';
  }
}

namespace {

constexpr std::array<std::pair<UnitClass, std::string_view>, 6> kUnitIds = {{
    {UnitClass::kScalarAlu, "scalar_alu"},
    {UnitClass::kScalarLoad, "scalar_load"},
    {UnitClass::kBranch, "branch"},
    {UnitClass::kVectorLoad, "vector_load"},
    {UnitClass::kVectorAlu, "vector_alu"},
    {UnitClass::kVectorMac, "vector_mac"},
}};

bool IsPowerOfTwo(int v) { return v > 0 && std::has_single_bit(static_cast<unsigned>(v)); }

}  // namespace

std::string_view UnitId(UnitClass unit) {
  for (const auto& [u, id] : kUnitIds) {
    if (u == unit) return id;
  }
  return "unknown";
}

std::optional<UnitClass> UnitFromId(std::string_view id) {
  for (const auto& [u, name] : kUnitIds) {
    if (name == id) return u;
  }
  return std::nullopt;
}

int MachineConfig::FirstChunkOffset(UnitClass unit) const {
  switch (unit) {
    case UnitClass::kVectorLoad: return load_first_chunk_offset;
    case UnitClass::kVectorAlu: return alu_first_chunk_offset;
    case UnitClass::kVectorMac: return mac_first_chunk_offset;
    default: return 0;
  }
}

int MachineConfig::ChunksPerCycle(UnitClass unit) const {
  switch (unit) {
    case UnitClass::kVectorLoad: return load_chunks_per_cycle;
    case UnitClass::kVectorAlu:
    case UnitClass::kVectorMac: return wide_chunks_per_cycle;
    default: return 0;
  }
}

void MachineConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorKind::kConfig, "invalid machine config: " + what);
  };
  if (!IsPowerOfTwo(vlen_bits)) fail(fmt::format("vlen_bits={} is not a power of two", vlen_bits));
  if (!IsPowerOfTwo(dlen_bits)) fail(fmt::format("dlen_bits={} is not a power of two", dlen_bits));
  if (vlen_bits < dlen_bits) {
    fail(fmt::format("vlen_bits={} is smaller than dlen_bits={}", vlen_bits, dlen_bits));
  }
  if (num_vregs != 8 && num_vregs != 16 && num_vregs != 32) {
    fail(fmt::format("num_vregs={} is not one of 8, 16, 32", num_vregs));
  }
  if (load_first_chunk_offset < 0 || alu_first_chunk_offset < 0 ||
      mac_first_chunk_offset < 0 || scalar_load_latency < 0) {
    fail("latencies and offsets must be non-negative");
  }
  if (load_chunks_per_cycle < 1 || wide_chunks_per_cycle < 1) {
    fail("chunk throughputs must be at least 1");
  }
  if (issue_width < 1) fail("issue_width must be at least 1");
}

void VType::Validate(const MachineConfig& config) const {
  if (sew_bits != 8 && sew_bits != 16 && sew_bits != 32) {
    throw Error(ErrorKind::kConfig, fmt::format("unsupported sew={}", sew_bits));
  }
  if (lmul != 1 && lmul != 2 && lmul != 4 && lmul != 8) {
    throw Error(ErrorKind::kConfig, fmt::format("unsupported lmul={}", lmul));
  }
  if (lmul * config.vlen_bits < sew_bits) {
    throw Error(ErrorKind::kConfig,
                fmt::format("sew={} does not fit lmul={} at vlen={}", sew_bits,
                            lmul, config.vlen_bits));
  }
}

std::string RegGroup::ToString() const {
  if (width <= 1) return fmt::format("v{}", base);
  return fmt::format("v{}-v{}", base, end() - 1);
}

const std::vector<OpcodeInfo>& AllOpcodes() {
  using U = UnitClass;
  static const std::vector<OpcodeInfo> table = {
      {Opcode::kVle8, "vle8.v", U::kVectorLoad, false, 2, 8, 0},
      {Opcode::kVle16, "vle16.v", U::kVectorLoad, false, 2, 16, 0},
      {Opcode::kVl2re16, "vl2re16.v", U::kVectorLoad, false, 2, 16, 2},
      {Opcode::kVl4re16, "vl4re16.v", U::kVectorLoad, false, 2, 16, 4},
      {Opcode::kVwmaccVx, "vwmacc.vx", U::kVectorMac, true, 3, 0, 0},
      {Opcode::kVwmaccVv, "vwmacc.vv", U::kVectorMac, true, 3, 0, 0},
      {Opcode::kVwaddWv, "vwadd.wv", U::kVectorAlu, true, 3, 0, 0},
      {Opcode::kLb, "lb", U::kScalarLoad, false, 2, 0, 0},
      {Opcode::kLbu, "lbu", U::kScalarLoad, false, 2, 0, 0},
      {Opcode::kLh, "lh", U::kScalarLoad, false, 2, 0, 0},
      {Opcode::kAddi, "addi", U::kScalarAlu, false, 3, 0, 0},
      {Opcode::kCAddi, "c.addi", U::kScalarAlu, false, 2, 0, 0},
      {Opcode::kBne, "bne", U::kBranch, false, 3, 0, 0},
  };
  return table;
}

const OpcodeInfo& Info(Opcode opcode) {
  return AllOpcodes()[static_cast<size_t>(opcode)];
}

std::optional<Opcode> LookupMnemonic(std::string_view mnemonic) {
  for (const auto& info : AllOpcodes()) {
    if (info.mnemonic == mnemonic) return info.opcode;
  }
  return std::nullopt;
}

std::vector<RegGroup> Instruction::VectorReads() const {
  std::vector<RegGroup> reads;
  for (const auto& op : sources) {
    if (const auto* g = std::get_if<RegGroup>(&op)) reads.push_back(*g);
  }
  if (unit() == UnitClass::kVectorMac) {
    if (const auto* d = vector_dest()) reads.push_back(*d);
  }
  return reads;
}

std::vector<RegGroup> Instruction::VectorGroups() const {
  std::vector<RegGroup> groups;
  if (const auto* d = vector_dest()) groups.push_back(*d);
  for (const auto& op : sources) {
    if (const auto* g = std::get_if<RegGroup>(&op)) groups.push_back(*g);
  }
  return groups;
}

std::vector<int> Instruction::ScalarReads() const {
  std::vector<int> reads;
  for (const auto& op : sources) {
    if (const auto* r = std::get_if<ScalarReg>(&op)) reads.push_back(r->index);
  }
  if (addr_base) reads.push_back(addr_base->index);
  if (opcode == Opcode::kCAddi) {
    if (const auto* d = scalar_dest()) reads.push_back(d->index);
  }
  return reads;
}

EmulPair EffectiveEmul(Opcode opcode, const VType& vtype) {
  const OpcodeInfo& info = Info(opcode);
  EmulPair emul;
  if (info.whole_regs > 0) {
    emul.dest = info.whole_regs;
  } else if (info.load_eew > 0) {
    // Unit-stride load: EMUL = (EEW / SEW) * LMUL.
    const int scaled = info.load_eew * vtype.lmul;
    if (scaled % vtype.sew_bits != 0) {
      throw Error(ErrorKind::kInvalidGrouping,
                  fmt::format("{} under sew={} lmul={} needs a fractional EMUL",
                              info.mnemonic, vtype.sew_bits, vtype.lmul));
    }
    emul.dest = scaled / vtype.sew_bits;
  } else if (info.widening) {
    emul.source = vtype.lmul;
    emul.dest = 2 * vtype.lmul;
  }
  if (emul.dest > kMaxEmul) {
    throw Error(ErrorKind::kInvalidGrouping,
                fmt::format("{} under lmul={} needs EMUL {} > {}", info.mnemonic,
                            vtype.lmul, emul.dest, kMaxEmul));
  }
  return emul;
}

Rational ChainingRatio(int emul, const MachineConfig& config) {
  return Rational(static_cast<std::int64_t>(emul) * config.vlen_bits,
                  config.dlen_bits);
}

int OutputChunks(const Instruction& instr, const VType& vtype,
                 const MachineConfig& config) {
  if (!instr.IsVector()) return 0;
  return EffectiveEmul(instr.opcode, vtype).dest * config.chunks_per_reg();
}

int OccupancyCycles(const Instruction& instr, const VType& vtype,
                    const MachineConfig& config) {
  if (!instr.IsVector()) return 0;
  const int chunks = OutputChunks(instr, vtype, config);
  const int per_cycle = config.ChunksPerCycle(instr.unit());
  return (chunks + per_cycle - 1) / per_cycle;
}

namespace {

struct AbiName {
  std::string_view name;
  int index;
};

constexpr std::array<AbiName, 33> kAbiNames = {{
    {"zero", 0}, {"ra", 1},  {"sp", 2},   {"gp", 3},   {"tp", 4},  {"t0", 5},
    {"t1", 6},   {"t2", 7},  {"s0", 8},   {"fp", 8},   {"s1", 9},  {"a0", 10},
    {"a1", 11},  {"a2", 12}, {"a3", 13},  {"a4", 14},  {"a5", 15}, {"a6", 16},
    {"a7", 17},  {"s2", 18}, {"s3", 19},  {"s4", 20},  {"s5", 21}, {"s6", 22},
    {"s7", 23},  {"s8", 24}, {"s9", 25},  {"s10", 26}, {"s11", 27}, {"t3", 28},
    {"t4", 29},  {"t5", 30}, {"t6", 31},
}};

}  // namespace

std::optional<int> ParseScalarRegName(std::string_view name) {
  if (name.size() >= 2 && name[0] == 'x') {
    int index = -1;
    auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
    if (ec == std::errc() && ptr == name.data() + name.size() && index >= 0 &&
        index < kNumScalarRegs) {
      return index;
    }
    return std::nullopt;
  }
  for (const auto& abi : kAbiNames) {
    if (abi.name == name) return abi.index;
  }
  return std::nullopt;
}

std::string ScalarRegName(int index) { return fmt::format("x{}", index); }

}  // namespace rvvsim
