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

#ifndef RVVSIM_ISA_H_
#define RVVSIM_ISA_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/rational.hpp>

// Instruction vocabulary, vtype semantics and DLEN-chunk arithmetic shared by
// the parser, the timing model, the architectural executor and the analyses.

namespace rvvsim {

using Rational = boost::rational<std::int64_t>;

inline constexpr int kNumScalarRegs = 32;
inline constexpr int kMaxVectorRegs = 32;
inline constexpr int kMaxEmul = 8;

enum class UnitClass {
  kScalarAlu,
  kScalarLoad,
  kBranch,
  kVectorLoad,
  kVectorAlu,
  kVectorMac,
};

inline constexpr UnitClass kVectorUnits[] = {
    UnitClass::kVectorMac, UnitClass::kVectorAlu, UnitClass::kVectorLoad};

bool IsVectorUnit(UnitClass unit);

// Name used in the "Unit" column of a trace: VLOAD, ALU, VMAC or Scalar.
std::string_view UnitName(UnitClass unit);

// Single-letter tag that prefixes chunk writes in a trace (L, A, M).
char UnitTag(UnitClass unit);

// Stable identifier for machine-readable output ("vector_mac", ...).
std::string_view UnitId(UnitClass unit);
std::optional<UnitClass> UnitFromId(std::string_view id);

// Parameters of the modeled core. Field names double as the keys of the
// machine config file format.
struct MachineConfig {
  int vlen_bits = 64;
  int dlen_bits = 32;
  int num_vregs = 32;
  // Cycles from issue to the first chunk writeback, per vector unit.
  int load_first_chunk_offset = 0;
  int alu_first_chunk_offset = 3;
  int mac_first_chunk_offset = 5;
  // Cycles from issue until a scalar load result may be consumed.
  int scalar_load_latency = 1;
  int load_chunks_per_cycle = 1;
  int wide_chunks_per_cycle = 2;
  int issue_width = 1;

  // VLEN=64, DLEN=32, 32 registers; the defaults above.
  static MachineConfig Paper() { return MachineConfig{}; }

  int chunks_per_reg() const { return vlen_bits / dlen_bits; }
  int FirstChunkOffset(UnitClass unit) const;
  int ChunksPerCycle(UnitClass unit) const;

  // Throws Error(kConfig) on a violated invariant.
  void Validate() const;

  bool operator==(const MachineConfig&) const = default;
};

struct VType {
  int sew_bits = 8;
  int lmul = 1;

  void Validate(const MachineConfig& config) const;
  // VLMAX for this vtype: elements per LMUL register group.
  int Elements(const MachineConfig& config) const {
    return lmul * config.vlen_bits / sew_bits;
  }

  bool operator==(const VType&) const = default;
};

// A run of `width` consecutive vector registers starting at `base`.
struct RegGroup {
  int base = 0;
  int width = 1;

  int end() const { return base + width; }
  bool aligned() const { return width > 0 && base % width == 0; }
  bool Contains(int vreg) const { return vreg >= base && vreg < end(); }
  bool Overlaps(const RegGroup& other) const {
    return base < other.end() && other.base < end();
  }
  // "v8" for a single register, "v8-v9" for a group.
  std::string ToString() const;

  bool operator==(const RegGroup&) const = default;
};

struct ScalarReg {
  int index = 0;
  // Name as written in the source (ABI alias or xN); cosmetic only.
  std::string spelling;

  bool operator==(const ScalarReg& other) const { return index == other.index; }
};

// Signed immediate. A non-empty `symbol` marks a named immediate (e.g. the
// row stride N in "lb x7,N(x5)" or a branch label) resolved at run time.
struct Immediate {
  std::int64_t value = 0;
  std::string symbol;
  std::string spelling;

  bool operator==(const Immediate& other) const {
    return value == other.value && symbol == other.symbol;
  }
};

using Operand = std::variant<RegGroup, ScalarReg, Immediate>;
using Destination = std::variant<std::monostate, RegGroup, ScalarReg>;

enum class Opcode {
  kVle8,
  kVle16,
  kVl2re16,
  kVl4re16,
  kVwmaccVx,
  kVwmaccVv,
  kVwaddWv,
  kLb,
  kLbu,
  kLh,
  kAddi,
  kCAddi,
  kBne,
};

struct OpcodeInfo {
  Opcode opcode;
  std::string_view mnemonic;
  UnitClass unit;
  bool widening;
  int operand_count;
  // Element width of a vector load in bits; 0 for everything else.
  int load_eew;
  // N of a whole-register load vlNreM; 0 otherwise.
  int whole_regs;
};

const OpcodeInfo& Info(Opcode opcode);
std::optional<Opcode> LookupMnemonic(std::string_view mnemonic);
const std::vector<OpcodeInfo>& AllOpcodes();

struct Instruction {
  Opcode opcode = Opcode::kAddi;
  Destination dest;
  // Explicit operands in canonical order. Vector-scalar MAC keeps the
  // scalar first (vd, rs1, vs2). The MAC accumulator is implied by dest.
  std::vector<Operand> sources;
  std::optional<ScalarReg> addr_base;
  std::optional<Immediate> addr_offset;
  // vwmacc.vx was written "vd, vs2, rs1"; affects rendering only.
  bool scalar_last = false;

  UnitClass unit() const { return Info(opcode).unit; }
  bool widening() const { return Info(opcode).widening; }
  std::string_view mnemonic() const { return Info(opcode).mnemonic; }
  bool IsVector() const { return IsVectorUnit(unit()); }

  const RegGroup* vector_dest() const { return std::get_if<RegGroup>(&dest); }
  const ScalarReg* scalar_dest() const { return std::get_if<ScalarReg>(&dest); }

  // Every vector group read, including the MAC accumulator.
  std::vector<RegGroup> VectorReads() const;
  // Every vector group named by the instruction (reads and writes).
  std::vector<RegGroup> VectorGroups() const;
  // Every scalar register read, including address bases and c.addi's rd.
  std::vector<int> ScalarReads() const;

  bool operator==(const Instruction& other) const {
    return opcode == other.opcode && dest == other.dest &&
           sources == other.sources && addr_base == other.addr_base &&
           addr_offset == other.addr_offset;
  }
};

// One DLEN-sized writeback: chunk `chunk` of register `vreg`.
struct ChunkWrite {
  int vreg = 0;
  int chunk = 0;
  UnitClass unit = UnitClass::kVectorLoad;

  bool operator==(const ChunkWrite&) const = default;
};

struct EmulPair {
  int source = 0;  // narrow vector source; 0 when the instruction has none
  int dest = 0;    // 0 for scalar destinations
};

// Register counts of the operands under `vtype`. Widening ops double the
// destination, vlNreM ignores vtype. Throws Error(kInvalidGrouping) if a
// group would exceed eight registers or be fractional.
EmulPair EffectiveEmul(Opcode opcode, const VType& vtype);

// (emul * VLEN) / DLEN, the cycles one instruction streams through a unit.
Rational ChainingRatio(int emul, const MachineConfig& config);

// DLEN chunks written by `instr`; 0 for scalar instructions.
int OutputChunks(const Instruction& instr, const VType& vtype,
                 const MachineConfig& config);

// Cycles the unit stays busy, starting at the first writeback.
int OccupancyCycles(const Instruction& instr, const VType& vtype,
                    const MachineConfig& config);

// Scalar register index for "x7", "a0", "s0", "zero", ...
std::optional<int> ParseScalarRegName(std::string_view name);
std::string ScalarRegName(int index);

}  // namespace rvvsim

#endif  // RVVSIM_ISA_H_
