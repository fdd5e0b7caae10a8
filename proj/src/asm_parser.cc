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

#include "rvvsim/asm_parser.h"

#include <cctype>
#include <charconv>
#include <sstream>

#include <fmt/format.h>

#include "rvvsim/errors.h"

namespace rvvsim {
namespace {

constexpr int kMnemonicColumn = 15;

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool IsIdentifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_' || s[0] == '.')) {
    return false;
  }
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
  }
  return true;
}

std::optional<std::int64_t> ParseInteger(std::string_view s) {
  s = Trim(s);
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s = Trim(s.substr(1));
  }
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    s = s.substr(2);
  }
  if (s.empty()) return std::nullopt;
  std::uint64_t magnitude = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), magnitude, base);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  const auto value = static_cast<std::int64_t>(magnitude);
  return negative ? -value : value;
}

// Builds instructions for one line at a time; keeps the context needed for
// error messages.
class LineParser {
 public:
  LineParser(int line_no, std::string_view line, const VType& vtype)
      : line_no_(line_no), line_(line), vtype_(vtype) {}

  [[noreturn]] void Fail(const std::string& what) const {
    throw Error(ErrorKind::kParse,
                fmt::format("line {}: {} in '{}'", line_no_, what, line_));
  }

  Instruction Parse(std::string_view mnemonic, std::string_view operand_text) {
    const auto opcode = LookupMnemonic(mnemonic);
    if (!opcode) Fail(fmt::format("unknown mnemonic '{}'", mnemonic));
    const OpcodeInfo& info = Info(*opcode);

    std::vector<std::string_view> ops;
    if (!Trim(operand_text).empty()) {
      size_t start = 0;
      while (true) {
        const auto comma = operand_text.find(',', start);
        ops.push_back(Trim(operand_text.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
    }
    if (static_cast<int>(ops.size()) != info.operand_count) {
      Fail(fmt::format("{} takes {} operands, got {}", info.mnemonic,
                       info.operand_count, ops.size()));
    }

    EmulPair emul;
    try {
      emul = EffectiveEmul(*opcode, vtype_);
    } catch (const Error& e) {
      throw Error(e.kind(), fmt::format("line {}: {}", line_no_, e.what()));
    }

    Instruction instr;
    instr.opcode = *opcode;
    switch (*opcode) {
      case Opcode::kVle8:
      case Opcode::kVle16:
      case Opcode::kVl2re16:
      case Opcode::kVl4re16: {
        instr.dest = Group(ops[0], emul.dest);
        auto [offset, base] = Memory(ops[1]);
        if (offset) Fail("vector loads take no address offset");
        instr.addr_base = base;
        break;
      }
      case Opcode::kVwmaccVx: {
        instr.dest = Group(ops[0], emul.dest);
        const bool scalar_first = ParseScalarRegName(ops[1]).has_value();
        const bool scalar_second = ParseScalarRegName(ops[2]).has_value();
        if (scalar_first == scalar_second) {
          Fail("vwmacc.vx needs exactly one scalar and one vector source");
        }
        instr.scalar_last = scalar_second;
        instr.sources.push_back(Scalar(scalar_first ? ops[1] : ops[2]));
        instr.sources.push_back(Group(scalar_first ? ops[2] : ops[1], emul.source));
        break;
      }
      case Opcode::kVwmaccVv:
        instr.dest = Group(ops[0], emul.dest);
        instr.sources.push_back(Group(ops[1], emul.source));
        instr.sources.push_back(Group(ops[2], emul.source));
        break;
      case Opcode::kVwaddWv:
        instr.dest = Group(ops[0], emul.dest);
        instr.sources.push_back(Group(ops[1], emul.dest));
        instr.sources.push_back(Group(ops[2], emul.source));
        break;
      case Opcode::kLb:
      case Opcode::kLbu:
      case Opcode::kLh: {
        instr.dest = Scalar(ops[0]);
        auto [offset, base] = Memory(ops[1]);
        instr.addr_offset = offset;
        instr.addr_base = base;
        break;
      }
      case Opcode::kAddi:
        instr.dest = Scalar(ops[0]);
        instr.sources.push_back(Scalar(ops[1]));
        instr.sources.push_back(Imm(ops[2]));
        break;
      case Opcode::kCAddi:
        instr.dest = Scalar(ops[0]);
        instr.sources.push_back(Imm(ops[1]));
        break;
      case Opcode::kBne:
        instr.sources.push_back(Scalar(ops[0]));
        instr.sources.push_back(Scalar(ops[1]));
        instr.sources.push_back(BranchTarget(ops[2]));
        break;
    }
    return instr;
  }

 private:
  RegGroup Group(std::string_view token, int width) const {
    if (token.size() < 2 || token[0] != 'v') {
      Fail(fmt::format("expected a vector register, got '{}'", token));
    }
    int index = -1;
    auto [ptr, ec] = std::from_chars(token.data() + 1, token.data() + token.size(), index);
    if (ec != std::errc() || ptr != token.data() + token.size() || index < 0) {
      Fail(fmt::format("expected a vector register, got '{}'", token));
    }
    if (index >= kMaxVectorRegs) {
      Fail(fmt::format("vector register index {} is out of range (>= {})", index,
                       kMaxVectorRegs));
    }
    RegGroup group{index, width};
    if (!group.aligned()) {
      Fail(fmt::format("group misalignment: v{} is not aligned to EMUL {}", index, width));
    }
    if (group.end() > kMaxVectorRegs) {
      Fail(fmt::format("group {} runs past v{}", group.ToString(), kMaxVectorRegs - 1));
    }
    return group;
  }

  ScalarReg Scalar(std::string_view token) const {
    const auto index = ParseScalarRegName(token);
    if (!index) Fail(fmt::format("expected a scalar register, got '{}'", token));
    return ScalarReg{*index, std::string(token)};
  }

  Immediate Imm(std::string_view token) const {
    if (const auto value = ParseInteger(token)) {
      return Immediate{*value, {}, std::string(token)};
    }
    if (IsIdentifier(token)) return Immediate{0, std::string(token), std::string(token)};
    Fail(fmt::format("bad immediate '{}'", token));
  }

  std::pair<std::optional<Immediate>, ScalarReg> Memory(std::string_view token) const {
    const auto open = token.find('(');
    const auto close = token.rfind(')');
    if (open == std::string_view::npos || close != token.size() - 1 || close < open) {
      Fail(fmt::format("expected an address operand 'off(reg)', got '{}'", token));
    }
    const std::string_view offset = Trim(token.substr(0, open));
    const ScalarReg base = Scalar(Trim(token.substr(open + 1, close - open - 1)));
    if (offset.empty()) return {std::nullopt, base};
    return {Imm(offset), base};
  }

  Immediate BranchTarget(std::string_view token) const {
    Immediate target;
    target.spelling = std::string(token);
    if (token.starts_with("pc")) {
      const auto rest = Trim(token.substr(2));
      const auto offset = ParseInteger(rest);
      if (rest.empty() || (rest[0] != '-' && rest[0] != '+') || !offset) {
        Fail(fmt::format("bad pc-relative target '{}'", token));
      }
      target.value = *offset;
    } else if (const auto value = ParseInteger(token)) {
      target.value = *value;
      // Hex offsets are written as 32-bit two's complement (0xffffffe6).
      if (target.value >= (std::int64_t{1} << 31) && target.value < (std::int64_t{1} << 32)) {
        target.value -= std::int64_t{1} << 32;
      }
    } else if (IsIdentifier(token)) {
      target.symbol = std::string(token);
      return target;
    } else {
      Fail(fmt::format("bad branch target '{}'", token));
    }
    if (target.value >= 0) {
      Fail(fmt::format("branch target '{}' is not a backward branch", token));
    }
    return target;
  }

  int line_no_;
  std::string_view line_;
  const VType& vtype_;
};

VType ParseVTypeDirective(int line_no, std::string_view args) {
  VType vtype;
  bool have_sew = false;
  bool have_lmul = false;
  std::istringstream in{std::string(args)};
  std::string field;
  while (in >> field) {
    const auto eq = field.find('=');
    const auto value = eq == std::string::npos
                           ? std::nullopt
                           : ParseInteger(std::string_view(field).substr(eq + 1));
    const std::string key = field.substr(0, eq);
    if (!value || (key != "sew" && key != "lmul")) {
      throw Error(ErrorKind::kParse,
                  fmt::format("line {}: bad .vtype field '{}'", line_no, field));
    }
    if (key == "sew") {
      vtype.sew_bits = static_cast<int>(*value);
      have_sew = true;
    } else {
      vtype.lmul = static_cast<int>(*value);
      have_lmul = true;
    }
  }
  if (!have_sew || !have_lmul) {
    throw Error(ErrorKind::kParse,
                fmt::format("line {}: .vtype needs sew=<n> and lmul=<n>", line_no));
  }
  const int sew = vtype.sew_bits;
  const int lmul = vtype.lmul;
  if ((sew != 8 && sew != 16 && sew != 32) ||
      (lmul != 1 && lmul != 2 && lmul != 4 && lmul != 8)) {
    throw Error(ErrorKind::kParse,
                fmt::format("line {}: unsupported vtype sew={} lmul={}", line_no, sew, lmul));
  }
  return vtype;
}

}  // namespace

Program ParseProgram(std::string_view text, const ParseOptions& options) {
  struct PendingLine {
    int line_no;
    std::string text;
    std::string mnemonic;
    std::string operands;
  };

  Program program;
  std::optional<VType> vtype;
  std::vector<PendingLine> pending;
  std::vector<std::pair<std::string, int>> label_lines;

  // First pass: directives and labels; instructions are decoded once the
  // vtype is known, since group widths depend on it.
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;

    if (line[0] == '.') {
      const auto space = line.find_first_of(" \t");
      const std::string_view directive = line.substr(0, space);
      const std::string_view args =
          space == std::string_view::npos ? std::string_view{} : Trim(line.substr(space));
      if (directive == ".name") {
        if (args.empty()) {
          throw Error(ErrorKind::kParse, fmt::format("line {}: .name needs a value", line_no));
        }
        program.name = std::string(args);
      } else if (directive == ".vtype") {
        if (vtype) {
          throw Error(ErrorKind::kParse, fmt::format("line {}: duplicate .vtype", line_no));
        }
        vtype = ParseVTypeDirective(line_no, args);
      } else {
        throw Error(ErrorKind::kParse,
                    fmt::format("line {}: unknown directive '{}'", line_no, directive));
      }
      continue;
    }

    const auto space = line.find_first_of(" \t");
    std::string_view head = line.substr(0, space);
    std::string_view rest =
        space == std::string_view::npos ? std::string_view{} : Trim(line.substr(space));
    if (head.size() > 1 && head.back() == ':') {
      const std::string_view label = head.substr(0, head.size() - 1);
      if (!IsIdentifier(label)) {
        throw Error(ErrorKind::kParse, fmt::format("line {}: bad label '{}'", line_no, label));
      }
      label_lines.emplace_back(std::string(label), static_cast<int>(pending.size()));
      if (rest.empty()) continue;
      const auto next_space = rest.find_first_of(" \t");
      head = rest.substr(0, next_space);
      rest = next_space == std::string_view::npos ? std::string_view{}
                                                  : Trim(rest.substr(next_space));
    }
    pending.push_back({line_no, std::string(line), std::string(head), std::string(rest)});
  }

  if (options.vtype_override) vtype = options.vtype_override;
  if (!vtype) throw Error(ErrorKind::kParse, "missing .vtype directive");
  program.vtype = *vtype;

  for (const auto& [label, index] : label_lines) {
    if (!program.labels.emplace(label, index).second) {
      throw Error(ErrorKind::kParse, fmt::format("duplicate label '{}'", label));
    }
  }

  for (const auto& line : pending) {
    LineParser parser(line.line_no, line.text, program.vtype);
    program.instructions.push_back(parser.Parse(line.mnemonic, line.operands));
  }

  if (program.instructions.empty()) return program;

  std::vector<int> branches;
  for (size_t i = 0; i < program.instructions.size(); ++i) {
    if (program.instructions[i].opcode == Opcode::kBne) branches.push_back(static_cast<int>(i));
  }
  if (branches.empty()) throw Error(ErrorKind::kParse, "kernel has no loop back-edge (bne)");
  if (branches.size() > 1) {
    throw Error(ErrorKind::kParse,
                fmt::format("kernel has {} loop back-edges; expected exactly one",
                            branches.size()));
  }
  const int backedge = branches.front();
  if (backedge != static_cast<int>(program.instructions.size()) - 1) {
    throw Error(ErrorKind::kParse, "the loop back-edge must be the last instruction");
  }
  const auto& target = std::get<Immediate>(program.instructions[backedge].sources[2]);
  if (!target.symbol.empty()) {
    const auto it = program.labels.find(target.symbol);
    if (it == program.labels.end()) {
      throw Error(ErrorKind::kParse, fmt::format("undefined label '{}'", target.symbol));
    }
    if (it->second != 0) {
      throw Error(ErrorKind::kParse,
                  fmt::format("branch target '{}' is not the loop head", target.symbol));
    }
  }
  program.loop_backedge = backedge;
  return program;
}

namespace {

std::string RenderScalar(const ScalarReg& reg) {
  return reg.spelling.empty() ? ScalarRegName(reg.index) : reg.spelling;
}

std::string RenderImmediate(const Immediate& imm) {
  if (!imm.spelling.empty()) return imm.spelling;
  if (!imm.symbol.empty()) return imm.symbol;
  return fmt::format("{}", imm.value);
}

std::string RenderBranchTarget(const Immediate& imm) {
  if (!imm.spelling.empty()) return imm.spelling;
  if (!imm.symbol.empty()) return imm.symbol;
  return fmt::format("pc - {}", -imm.value);
}

std::string RenderOperand(const Operand& op) {
  if (const auto* g = std::get_if<RegGroup>(&op)) return fmt::format("v{}", g->base);
  if (const auto* r = std::get_if<ScalarReg>(&op)) return RenderScalar(*r);
  return RenderImmediate(std::get<Immediate>(op));
}

std::string RenderDest(const Instruction& instr) {
  if (const auto* g = instr.vector_dest()) return fmt::format("v{}", g->base);
  if (const auto* r = instr.scalar_dest()) return RenderScalar(*r);
  return {};
}

std::string RenderAddress(const Instruction& instr) {
  const std::string offset = instr.addr_offset ? RenderImmediate(*instr.addr_offset) : "";
  return fmt::format("{}({})", offset, RenderScalar(*instr.addr_base));
}

}  // namespace

std::string RenderOperands(const Instruction& instr) {
  switch (instr.opcode) {
    case Opcode::kVle8:
    case Opcode::kVle16:
    case Opcode::kVl2re16:
    case Opcode::kVl4re16:
    case Opcode::kLb:
    case Opcode::kLbu:
    case Opcode::kLh:
      return fmt::format("{},{}", RenderDest(instr), RenderAddress(instr));
    case Opcode::kVwmaccVx:
      if (instr.scalar_last) {
        return fmt::format("{},{},{}", RenderDest(instr), RenderOperand(instr.sources[1]),
                           RenderOperand(instr.sources[0]));
      }
      [[fallthrough]];
    case Opcode::kVwmaccVv:
    case Opcode::kVwaddWv:
    case Opcode::kAddi:
      return fmt::format("{},{},{}", RenderDest(instr), RenderOperand(instr.sources[0]),
                         RenderOperand(instr.sources[1]));
    case Opcode::kCAddi:
      return fmt::format("{},{}", RenderDest(instr), RenderOperand(instr.sources[0]));
    case Opcode::kBne:
      return fmt::format("{},{},{}", RenderOperand(instr.sources[0]),
                         RenderOperand(instr.sources[1]),
                         RenderBranchTarget(std::get<Immediate>(instr.sources[2])));
  }
  return {};
}

std::string RenderInstruction(const Instruction& instr) {
  return fmt::format("{:<{}}{}", instr.mnemonic(), kMnemonicColumn, RenderOperands(instr));
}

std::string RenderProgram(const Program& program) {
  std::string out;
  if (!program.name.empty()) out += fmt::format(".name  {}\n", program.name);
  out += fmt::format(".vtype sew={} lmul={}\n", program.vtype.sew_bits, program.vtype.lmul);
  for (size_t i = 0; i <= program.instructions.size(); ++i) {
    for (const auto& [label, index] : program.labels) {
      if (index == static_cast<int>(i)) out += label + ":\n";
    }
    if (i < program.instructions.size()) {
      out += RenderInstruction(program.instructions[i]) + "\n";
    }
  }
  return out;
}

}  // namespace rvvsim
