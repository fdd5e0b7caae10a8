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

#include "rvvsim/kernel_harness.h"

#include <array>
#include <cstdlib>
#include <random>
#include <set>

#include <fmt/format.h>

#include "rvvsim/errors.h"

namespace rvvsim {
namespace {

// Pointers start on separate 1 MiB regions so streams never alias.
constexpr std::uint32_t kRegionSize = 0x100000;

std::int64_t SignExtend(std::uint64_t value, int bits) {
  if (bits >= 64) return static_cast<std::int64_t>(value);
  const std::uint64_t mask = (1ULL << bits) - 1;
  const std::uint64_t sign = 1ULL << (bits - 1);
  return static_cast<std::int64_t>(((value & mask) ^ sign) - sign);
}

[[noreturn]] void Unsupported(const Program& program, const std::string& why) {
  throw Error(ErrorKind::kExec,
              fmt::format("kernel '{}' does not fit the reference: {}", program.name, why));
}

class Generator {
 public:
  Generator(std::uint64_t seed, InputMode mode) : rng_(seed), mode_(mode) {}

  std::uint8_t Byte() {
    static constexpr std::uint8_t kExtreme[] = {0x7f, 0x80, 0xff, 0x01};
    switch (mode_) {
      case InputMode::kZero: return 0;
      case InputMode::kRandom: return static_cast<std::uint8_t>(rng_());
      case InputMode::kExtreme: return kExtreme[rng_() % 4];
    }
    return 0;
  }

  std::int64_t Lane(int bits) {
    switch (mode_) {
      case InputMode::kZero: return 0;
      case InputMode::kRandom: return SignExtend(rng_(), bits);
      case InputMode::kExtreme: {
        const std::int64_t max = (std::int64_t{1} << (bits - 1)) - 1;
        const std::int64_t pick[] = {max, -max - 1, -1, 1};
        return pick[rng_() % 4];
      }
    }
    return 0;
  }

  std::uint32_t Word() { return static_cast<std::uint32_t>(rng_()); }

  int Uniform(int lo, int hi) { return lo + static_cast<int>(rng_() % (hi - lo + 1)); }

 private:
  std::mt19937_64 rng_;
  InputMode mode_;
};

std::int64_t ResolveImmediate(const Immediate& imm, const Bindings& bindings) {
  if (imm.symbol.empty()) return imm.value;
  const auto it = bindings.find(imm.symbol);
  return it == bindings.end() ? 0 : it->second;
}

bool IsLoad(const Instruction& instr) {
  return instr.unit() == UnitClass::kScalarLoad || instr.unit() == UnitClass::kVectorLoad;
}

std::uint32_t LoadSize(const Instruction& instr, const VType& vtype,
                       const MachineConfig& config) {
  switch (instr.opcode) {
    case Opcode::kLb:
    case Opcode::kLbu: return 1;
    case Opcode::kLh: return 2;
    default: break;
  }
  const OpcodeInfo& info = Info(instr.opcode);
  if (info.whole_regs > 0) return info.whole_regs * config.vlen_bits / 8;
  return vtype.Elements(config) * info.load_eew / 8;
}

// Register step per iteration from self-increments (addi rd,rd,imm and c.addi).
std::map<int, std::int64_t> SelfIncrements(const Program& program, const Bindings& bindings) {
  std::map<int, std::int64_t> steps;
  for (const auto& instr : program.instructions) {
    if (instr.opcode == Opcode::kCAddi) {
      steps[instr.scalar_dest()->index] +=
          ResolveImmediate(std::get<Immediate>(instr.sources[0]), bindings);
    } else if (instr.opcode == Opcode::kAddi &&
               std::get<ScalarReg>(instr.sources[0]).index == instr.scalar_dest()->index) {
      steps[instr.scalar_dest()->index] +=
          ResolveImmediate(std::get<Immediate>(instr.sources[1]), bindings);
    }
  }
  return steps;
}

struct LoadEvent {
  std::uint32_t addr = 0;
  std::uint32_t size = 0;
};

// The listing's index of the last load before `consumer` writing `group`.
int VectorProducer(const Program& program, int consumer, const RegGroup& group) {
  for (int i = consumer - 1; i >= 0; --i) {
    const Instruction& instr = program.instructions[i];
    if (instr.unit() == UnitClass::kVectorLoad && *instr.vector_dest() == group) return i;
  }
  Unsupported(program, fmt::format("no load of {} precedes instruction {}", group.ToString(),
                                   consumer));
}

int ScalarProducer(const Program& program, int consumer, int reg) {
  for (int i = consumer - 1; i >= 0; --i) {
    const Instruction& instr = program.instructions[i];
    if (instr.unit() == UnitClass::kScalarLoad && instr.scalar_dest()->index == reg) return i;
  }
  Unsupported(program, fmt::format("no load of {} precedes instruction {}", ScalarRegName(reg),
                                   consumer));
}

std::uint64_t ReadLittleEndian(const ArchState& state, std::uint32_t addr, std::uint32_t size) {
  const auto bytes = state.ReadMemory(addr, size);
  std::uint64_t raw = 0;
  for (std::uint32_t i = 0; i < size; ++i) raw |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return raw;
}

std::vector<std::uint8_t> PackLanes(const std::vector<std::int64_t>& lanes, int bits) {
  std::vector<std::uint8_t> bytes;
  for (std::int64_t lane : lanes) {
    for (int b = 0; b < bits / 8; ++b) {
      bytes.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(lane) >> (8 * b)));
    }
  }
  return bytes;
}

}  // namespace

std::int64_t WrapSigned(std::int64_t value, int bits) {
  return SignExtend(static_cast<std::uint64_t>(value), bits);
}

Matrix GemmTileReference(const Matrix& a, const Matrix& b, Matrix c, int acc_bits) {
  for (size_t r = 0; r < c.size(); ++r) {
    for (size_t j = 0; j < c[r].size(); ++j) {
      std::int64_t sum = c[r][j];
      for (size_t k = 0; k < b.size(); ++k) sum += a[r][k] * b[k][j];
      c[r][j] = WrapSigned(sum, acc_bits);
    }
  }
  return c;
}

std::vector<std::int64_t> GemvReference(const Matrix& m, const std::vector<std::int64_t>& x,
                                        std::vector<std::int64_t> y, int acc_bits) {
  for (size_t i = 0; i < y.size(); ++i) {
    std::int64_t sum = y[i];
    for (size_t k = 0; k < m.size(); ++k) sum += m[k][i] * x[k];
    y[i] = WrapSigned(sum, acc_bits);
  }
  return y;
}

std::vector<std::int64_t> AccumulateReference(const std::vector<std::int64_t>& samples,
                                              std::vector<std::int64_t> lanes, int acc_bits) {
  for (size_t i = 0; i < samples.size(); ++i) {
    auto& lane = lanes[i % lanes.size()];
    lane = WrapSigned(lane + samples[i], acc_bits);
  }
  return lanes;
}

std::vector<std::int64_t> DotLanesReference(const std::vector<std::int64_t>& a,
                                            const std::vector<std::int64_t>& b,
                                            std::vector<std::int64_t> lanes, int acc_bits) {
  for (size_t i = 0; i < a.size(); ++i) {
    auto& lane = lanes[i % lanes.size()];
    lane = WrapSigned(lane + a[i] * b[i], acc_bits);
  }
  return lanes;
}

std::optional<InputMode> ParseInputMode(std::string_view name) {
  if (name == "random") return InputMode::kRandom;
  if (name == "zero") return InputMode::kZero;
  if (name == "extreme") return InputMode::kExtreme;
  return std::nullopt;
}

std::vector<std::int64_t> UnpackLanes(const std::vector<std::uint8_t>& bytes, int bits) {
  std::vector<std::int64_t> lanes;
  const size_t size = bits / 8;
  for (size_t i = 0; i + size <= bytes.size(); i += size) {
    std::uint64_t raw = 0;
    for (size_t b = 0; b < size; ++b) raw |= static_cast<std::uint64_t>(bytes[i + b]) << (8 * b);
    lanes.push_back(SignExtend(raw, bits));
  }
  return lanes;
}

OracleCase BuildOracleCase(const Program& program, ReferenceKind kind,
                           const MachineConfig& config, std::uint64_t seed, InputMode mode,
                           int trip_count) {
  if (program.empty() || program.loop_backedge < 0) Unsupported(program, "no loop");
  Generator gen(seed, mode);
  OracleCase oracle;
  oracle.trip_count = trip_count > 0 ? trip_count : gen.Uniform(1, 12);
  const int trips = oracle.trip_count;
  const VType& vtype = program.vtype;
  const int sew = vtype.sew_bits;
  const int vlmax = vtype.Elements(config);

  // Symbolic immediates. Offsets separate two streams sharing one pointer,
  // so they are placed past everything the loop walks.
  const std::map<int, std::int64_t> steps = SelfIncrements(program, oracle.bindings);
  for (const auto& instr : program.instructions) {
    if (instr.addr_offset && !instr.addr_offset->symbol.empty()) {
      const auto it = steps.find(instr.addr_base->index);
      const std::int64_t stride = it == steps.end() ? 1 : std::max<std::int64_t>(1, std::llabs(it->second));
      oracle.bindings[instr.addr_offset->symbol] = stride * trips * gen.Uniform(1, 2);
    }
  }

  // Loop counter: the bne operand the loop advances; the other is the bound.
  const Instruction& branch = program.instructions[program.loop_backedge];
  const int lhs = std::get<ScalarReg>(branch.sources[0]).index;
  const int rhs = std::get<ScalarReg>(branch.sources[1]).index;
  std::set<int> written;
  for (const auto& instr : program.instructions) {
    if (const ScalarReg* d = instr.scalar_dest()) written.insert(d->index);
  }
  auto advanced = [&](int reg) {
    const auto it = steps.find(reg);
    return it != steps.end() && it->second != 0;
  };
  int counter = -1, bound = -1;
  if (advanced(lhs) && !written.count(rhs)) {
    counter = lhs, bound = rhs;
  } else if (advanced(rhs) && !written.count(lhs)) {
    counter = rhs, bound = lhs;
  } else {
    Unsupported(program, "cannot tell the loop counter from the bound");
  }

  ArchState& state = oracle.init;
  state = ArchState::Create(config);
  std::set<int> pointers = {counter};
  for (const auto& instr : program.instructions) {
    if (instr.addr_base) pointers.insert(instr.addr_base->index);
  }
  for (int r = 1; r < kNumScalarRegs; ++r) state.x[r] = gen.Word();
  std::uint32_t region = kRegionSize;
  for (int r : pointers) {
    if (r == 0) continue;
    state.x[r] = region;
    region += kRegionSize;
  }

  // Walk the loop on pointer values only to find every load address.
  std::array<std::optional<std::uint32_t>, kNumScalarRegs> known;
  for (int r = 0; r < kNumScalarRegs; ++r) known[r] = state.x[r];
  known[0] = 0;
  const int body = static_cast<int>(program.instructions.size());
  std::vector<std::vector<LoadEvent>> events(body, std::vector<LoadEvent>(trips));
  for (int k = 0; k < trips; ++k) {
    for (int i = 0; i < body; ++i) {
      const Instruction& instr = program.instructions[i];
      if (IsLoad(instr)) {
        const auto& base = known[instr.addr_base->index];
        if (!base) Unsupported(program, fmt::format("instruction {} loads through data", i));
        const std::int64_t offset =
            instr.addr_offset ? ResolveImmediate(*instr.addr_offset, oracle.bindings) : 0;
        events[i][k] = {static_cast<std::uint32_t>(*base + offset),
                        LoadSize(instr, vtype, config)};
        if (const ScalarReg* d = instr.scalar_dest(); d && d->index != 0) known[d->index].reset();
      } else if (instr.opcode == Opcode::kAddi) {
        const auto& src = known[std::get<ScalarReg>(instr.sources[0]).index];
        const int rd = instr.scalar_dest()->index;
        if (rd == 0) continue;
        known[rd] = src ? std::optional<std::uint32_t>(static_cast<std::uint32_t>(
                              *src + ResolveImmediate(std::get<Immediate>(instr.sources[1]),
                                                      oracle.bindings)))
                        : std::nullopt;
      } else if (instr.opcode == Opcode::kCAddi) {
        const int rd = instr.scalar_dest()->index;
        if (rd != 0 && known[rd]) {
          *known[rd] += static_cast<std::uint32_t>(
              ResolveImmediate(std::get<Immediate>(instr.sources[0]), oracle.bindings));
        }
      }
    }
  }
  if (!known[counter]) Unsupported(program, "loop counter is overwritten by a load");
  state.x[bound] = *known[counter];

  for (int i = 0; i < body; ++i) {
    for (const LoadEvent& e : events[i]) {
      for (std::uint32_t b = 0; b < e.size; ++b) {
        if (!state.memory.count(e.addr + b)) state.memory[e.addr + b] = gen.Byte();
      }
    }
  }

  // Operand values as the reference sees them.
  auto vector_operand = [&](int load, int k) {
    std::vector<std::int64_t> elems(vlmax);
    for (int e = 0; e < vlmax; ++e) {
      elems[e] = SignExtend(ReadLittleEndian(state, events[load][k].addr + e * sew / 8, sew / 8),
                            sew);
    }
    return elems;
  };
  auto scalar_operand = [&](int load, int k) {
    const Instruction& instr = program.instructions[load];
    const std::uint64_t raw = ReadLittleEndian(state, events[load][k].addr, events[load][k].size);
    const std::int64_t value = instr.opcode == Opcode::kLbu ? static_cast<std::int64_t>(raw)
                                                            : SignExtend(raw, 8 * events[load][k].size);
    // vwmacc.vx consumes the low SEW bits.
    return SignExtend(static_cast<std::uint64_t>(value), sew);
  };

  std::vector<int> compute;
  for (int i = 0; i < body; ++i) {
    const Opcode op = program.instructions[i].opcode;
    if (op == Opcode::kVwmaccVx || op == Opcode::kVwmaccVv || op == Opcode::kVwaddWv) {
      compute.push_back(i);
    }
  }
  const int acc_bits = 2 * sew;
  std::set<int> acc_bases;
  auto init_accumulator = [&](int i) {
    const RegGroup& dest = *program.instructions[i].vector_dest();
    if (!acc_bases.insert(dest.base).second) Unsupported(program, "shared accumulator");
    std::vector<std::int64_t> lanes(vlmax);
    for (auto& lane : lanes) lane = gen.Lane(acc_bits);
    state.WriteGroup(dest, PackLanes(lanes, acc_bits));
    return lanes;
  };
  auto expect = [&](int i, std::vector<std::int64_t> lanes) {
    oracle.expected.push_back({*program.instructions[i].vector_dest(), std::move(lanes), acc_bits});
  };
  auto require = [&](Opcode op, size_t count) {
    if (compute.size() != count) {
      Unsupported(program, fmt::format("expected {} compute instruction(s), found {}", count,
                                       compute.size()));
    }
    for (int i : compute) {
      if (program.instructions[i].opcode != op) {
        Unsupported(program, fmt::format("unexpected {}", program.instructions[i].mnemonic()));
      }
    }
  };

  switch (kind) {
    case ReferenceKind::kGemmTile:
    case ReferenceKind::kGemv: {
      if (compute.empty()) Unsupported(program, "no vwmacc.vx");
      require(Opcode::kVwmaccVx, kind == ReferenceKind::kGemv ? 1 : compute.size());
      const RegGroup b_group = std::get<RegGroup>(program.instructions[compute[0]].sources[1]);
      const int b_load = VectorProducer(program, compute[0], b_group);
      Matrix b(trips), a(compute.size(), std::vector<std::int64_t>(trips)), c;
      for (int k = 0; k < trips; ++k) b[k] = vector_operand(b_load, k);
      for (size_t r = 0; r < compute.size(); ++r) {
        const Instruction& mac = program.instructions[compute[r]];
        if (VectorProducer(program, compute[r], std::get<RegGroup>(mac.sources[1])) != b_load) {
          Unsupported(program, "rows read different vector operands");
        }
        const int a_load =
            ScalarProducer(program, compute[r], std::get<ScalarReg>(mac.sources[0]).index);
        for (int k = 0; k < trips; ++k) a[r][k] = scalar_operand(a_load, k);
        c.push_back(init_accumulator(compute[r]));
      }
      if (kind == ReferenceKind::kGemv) {
        expect(compute[0], GemvReference(b, a[0], c[0], acc_bits));
      } else {
        const Matrix result = GemmTileReference(a, b, c, acc_bits);
        for (size_t r = 0; r < compute.size(); ++r) expect(compute[r], result[r]);
      }
      break;
    }
    case ReferenceKind::kAccumulate: {
      require(Opcode::kVwaddWv, 1);
      const Instruction& add = program.instructions[compute[0]];
      if (std::get<RegGroup>(add.sources[0]) != *add.vector_dest()) {
        Unsupported(program, "vwadd.wv does not accumulate into its wide source");
      }
      const int load = VectorProducer(program, compute[0], std::get<RegGroup>(add.sources[1]));
      std::vector<std::int64_t> samples;
      for (int k = 0; k < trips; ++k) {
        const auto elems = vector_operand(load, k);
        samples.insert(samples.end(), elems.begin(), elems.end());
      }
      expect(compute[0], AccumulateReference(samples, init_accumulator(compute[0]), acc_bits));
      break;
    }
    case ReferenceKind::kDot: {
      require(Opcode::kVwmaccVv, 1);
      const Instruction& mac = program.instructions[compute[0]];
      const int a_load = VectorProducer(program, compute[0], std::get<RegGroup>(mac.sources[0]));
      const int b_load = VectorProducer(program, compute[0], std::get<RegGroup>(mac.sources[1]));
      std::vector<std::int64_t> a, b;
      for (int k = 0; k < trips; ++k) {
        const auto ea = vector_operand(a_load, k), eb = vector_operand(b_load, k);
        a.insert(a.end(), ea.begin(), ea.end());
        b.insert(b.end(), eb.begin(), eb.end());
      }
      expect(compute[0], DotLanesReference(a, b, init_accumulator(compute[0]), acc_bits));
      break;
    }
  }
  oracle.max_steps = static_cast<std::int64_t>(trips) * body + body;
  return oracle;
}

OracleResult CheckOracle(const Program& program, const OracleCase& oracle,
                         const MachineConfig& config) {
  OracleResult result;
  result.final_state = Run(program, config, oracle.init, oracle.max_steps, oracle.bindings);
  for (const ExpectedGroup& expected : oracle.expected) {
    const auto got = UnpackLanes(result.final_state.ReadGroup(expected.group), expected.lane_bits);
    for (size_t i = 0; i < expected.lanes.size(); ++i) {
      if (got[i] != expected.lanes[i]) {
        result.detail = fmt::format("{} lane {}: got {}, expected {}", expected.group.ToString(),
                                    i, got[i], expected.lanes[i]);
        return result;
      }
    }
  }
  result.pass = true;
  return result;
}

ArchState RenameVectorRegisters(const ArchState& state, const std::map<int, int>& map) {
  ArchState out = state;
  for (const auto& [from, to] : map) out.v[from].assign(out.v[from].size(), 0);
  for (const auto& [from, to] : map) out.v[to] = state.v[from];
  return out;
}

OracleCase RenameOracleCase(const OracleCase& oracle, const std::map<int, int>& map) {
  OracleCase out = oracle;
  out.init = RenameVectorRegisters(oracle.init, map);
  for (auto& e : out.expected) e.group.base = map.at(e.group.base);
  return out;
}

}  // namespace rvvsim
