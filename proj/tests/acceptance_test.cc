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

// Acceptance checks against the published figures. Prints one line per
// criterion and exits nonzero if any criterion fails.

#include <algorithm>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include "rvvsim/analysis.h"
#include "rvvsim/asm_parser.h"
#include "rvvsim/corpus.h"
#include "rvvsim/errors.h"
#include "rvvsim/kernel_harness.h"
#include "rvvsim/timing_sim.h"
#include "rvvsim/trace_render.h"
#include "test_util.h"

namespace rvvsim {
namespace {

using ::rvvsim::testing::CorpusProgram;
using ::rvvsim::testing::kCorpusNames;
using ::rvvsim::testing::RunTool;

const MachineConfig kPaper = MachineConfig::Paper();
constexpr int kIterations = 12;

// Collects the reasons a criterion fails.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok) problems_.push_back(what);
  }
  template <typename A, typename B>
  void Equal(const A& actual, const B& expected, const std::string& what) {
    if (!(actual == expected)) {
      problems_.push_back(fmt::format("{}: got {}, want {}", what, Show(actual), Show(expected)));
    }
  }
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  template <typename T>
  static std::string Show(const T& v) {
    if constexpr (std::is_same_v<T, Rational>) {
      return RenderRational(v);
    } else {
      std::ostringstream s;
      s << v;
      return s.str();
    }
  }
  std::vector<std::string> problems_;
};

std::string Squash(const std::string& text) {
  std::istringstream in(text);
  std::string word, out;
  while (in >> word) out += (out.empty() ? "" : " ") + word;
  return out;
}

struct Published {
  int period;
  UnitClass unit;
  Rational utilization;
  int vregs;
};

void ExpectMetrics(Check& c, const char* kernel, const Published& want) {
  const UtilizationReport r = Analyze(CorpusProgram(kernel), kPaper, kIterations);
  c.Equal(r.steady_period, want.period, fmt::format("{} period", kernel));
  const UnitUsage* u = r.Find(want.unit);
  if (u == nullptr) {
    c.Expect(false, fmt::format("{} has no {} unit", kernel, UnitName(want.unit)));
  } else {
    c.Equal(u->utilization, want.utilization, fmt::format("{} {} utilization", kernel, UnitName(want.unit)));
  }
  c.Equal(r.vregs_used, want.vregs, fmt::format("{} vector registers", kernel));
}

// Transcribed steady-state rows of the 2 x (VLEN*2) matrix tile.
struct PublishedRow {
  const char* issued;
  const char* mac;
  const char* load;
};
constexpr PublishedRow kGemmM2Rows[] = {
    {"vle8.v v8,(x28)", "M:v1:0,v1:1", "L:v8:0"},
    {"c.addi x28,0x10", "M:v2:0,v2:1", "L:v8:1"},
    {"lb x7,(x13)", "M:v3:0,v3:1", "L:v9:0"},
    {"vwmacc.vx v0,x7,v8", "M:v4:0,v4:1", "L:v9:1"},
    {"c.addi x13,0x1", "M:v5:0,v5:1", "."},
    {"lb x8,(x5)", "M:v6:0,v6:1", "."},
    {"c.addi x5,0x1", "M:v7:0,v7:1", "."},
    {"vwmacc.vx v4,x8,v8", ".", "."},
    {"bne x13,x15,0xffffffe6", "M:v0:0,v0:1", "."},
};

void Criterion1(Check& c) {
  ExpectMetrics(c, "gemm_m2", {9, UnitClass::kVectorMac, Rational(8, 9), 10});
  c.Equal(RenderPercent(Rational(8, 9)), std::string("89"), "rendered percent");
  const Trace t = Simulate(CorpusProgram("gemm_m2"), kPaper, kIterations);
  const auto window = t.SteadyWindow();
  c.Equal(window.size(), std::size(kGemmM2Rows), "window rows");
  for (size_t i = 0; i < std::min(window.size(), std::size(kGemmM2Rows)); ++i) {
    const TraceRow& row = window[i];
    const PublishedRow& want = kGemmM2Rows[i];
    const std::string issued = row.issued ? Squash(row.issued->text) : "-";
    c.Equal(issued, std::string(want.issued), fmt::format("row {} issued", i));
    c.Equal(RenderWriteCell(row, UnitClass::kVectorMac), std::string(want.mac), fmt::format("row {} MAC", i));
    c.Equal(RenderWriteCell(row, UnitClass::kVectorLoad), std::string(want.load),
            fmt::format("row {} load", i));
  }
}

void Criterion2(Check& c) {
  ExpectMetrics(c, "gemm_m2_b", {8, UnitClass::kVectorMac, Rational(8, 8), 10});
}

void Criterion3(Check& c) {
  ExpectMetrics(c, "gemm_m1", {9, UnitClass::kVectorMac, Rational(4, 9), 4});
  c.Equal(RenderPercent(Rational(4, 9)), std::string("44"), "rendered percent");
}

void Criterion4(Check& c) {
  ExpectMetrics(c, "gemm_m4", {16, UnitClass::kVectorMac, Rational(16, 16), 20});
  // Cycles shown as "-" in the published 16-cycle listing.
  const std::set<int> published_idle = {3, 4, 5, 10, 11, 12, 13};
  const Trace t = Simulate(CorpusProgram("gemm_m4"), kPaper, kIterations);
  std::set<int> idle;
  const auto window = t.SteadyWindow();
  for (size_t i = 0; i < window.size(); ++i) {
    if (!window[i].issued) idle.insert(static_cast<int>(i));
  }
  c.Expect(idle == published_idle, fmt::format("gemm_m4 idle slots at {}", fmt::join(idle, ",")));
}

void Criterion5(Check& c) {
  ExpectMetrics(c, "accum_m2", {4, UnitClass::kVectorAlu, Rational(4, 4), 6});
  ExpectMetrics(c, "accum_m2", {4, UnitClass::kVectorLoad, Rational(4, 4), 6});
}

void Criterion6(Check& c) {
  ExpectMetrics(c, "dot_m2", {8, UnitClass::kVectorMac, Rational(1, 2), 8});
  ExpectMetrics(c, "dot_m2", {8, UnitClass::kVectorLoad, Rational(8, 8), 8});
}

void Criterion7(Check& c) {
  ExpectMetrics(c, "gemv_m4", {9, UnitClass::kVectorMac, Rational(8, 9), 12});
}

// Transcribed results summary: kernel, LMUL, registers, percent.
struct PublishedSummary {
  const char* kernel;
  int lmul;
  const char* vregs;
  const char* percent;
};
constexpr PublishedSummary kSummary[] = {
    {"Matrix*Matrix", 2, "10", "89 to 100"},
    {"Matrix*Matrix", 1, "4", "44 to 50"},
    {"Accumulation", 2, "6", "100"},
    {"Dot product", 2, "8", "50"},
    {"Matrix*Vector", 4, "12", "89"},
};

void Criterion8(Check& c) {
  const auto run = RunTool({"analyze", "--all", "--format", "json"});
  c.Equal(run.exit_code, 0, "analyze --all exit code");
  if (run.exit_code != 0) return;
  const nlohmann::json rows = nlohmann::json::parse(run.out)["rows"];
  c.Equal(rows.size(), std::size(kSummary), "summary rows");
  for (size_t i = 0; i < std::min(rows.size(), std::size(kSummary)); ++i) {
    const auto& want = kSummary[i];
    const auto& row = rows[i];
    const std::string label = fmt::format("row {} ({} LMUL={})", i, want.kernel, want.lmul);
    c.Equal(row["kernel"].get<std::string>(), std::string(want.kernel), label + " kernel");
    c.Equal(row["lmul"].get<int>(), want.lmul, label + " lmul");
    c.Equal(row["vregs"].get<std::string>(), std::string(want.vregs), label + " registers");
    c.Equal(row["percent"].get<std::string>(), std::string(want.percent), label + " percent");
  }
}

void Criterion9(Check& c) {
  std::vector<std::string> fit8;
  for (const char* name : kCorpusNames) {
    const Program p = CorpusProgram(name);
    c.Expect(FitCheck(p, 16).empty(), fmt::format("{} does not fit 16", name));
    if (FitCheck(p, 8).empty()) fit8.push_back(name);
  }
  const std::vector<std::string> want = {"gemm_m1", "accum_m2", "dot_m2"};
  c.Expect(fit8 == want, fmt::format("fit 8: {}, want {}", fmt::join(fit8, ","), fmt::join(want, ",")));
}

void Criterion10(Check& c) {
  for (const char* name : kCorpusNames) {
    const Program p = CorpusProgram(name);
    const ReferenceKind kind = CorpusLookup(name).reference;
    for (InputMode mode : {InputMode::kRandom, InputMode::kExtreme}) {
      for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const OracleResult r = CheckOracle(p, BuildOracleCase(p, kind, kPaper, seed, mode), kPaper);
        if (!r.pass) {
          c.Expect(false, fmt::format("{} seed {}: {}", name, seed, r.detail));
          break;
        }
      }
    }
  }
}

void Criterion11(Check& c) {
  for (const char* name : kCorpusNames) {
    const Program p = CorpusProgram(name);
    const Trace t = Simulate(p, kPaper, kIterations);

    const Trace again = Simulate(p, kPaper, kIterations);
    c.Expect(TraceToJson(t, TraceWindow::kFull) == TraceToJson(again, TraceWindow::kFull),
             fmt::format("{} not deterministic", name));

    int chunks = 0;
    for (const auto& instr : p.instructions) chunks += OutputChunks(instr, p.vtype, kPaper);
    int written = 0;
    for (const auto& row : t.SteadyWindow()) written += static_cast<int>(row.writes.size());
    c.Equal(written, chunks * t.IterationsPerPeriod(), fmt::format("{} chunk writes per period", name));

    for (UnitClass unit : t.vector_units) {
      int occupancy = 0;
      for (const auto& instr : p.instructions) {
        if (instr.unit() == unit) occupancy += OccupancyCycles(instr, p.vtype, kPaper);
      }
      c.Equal(BusyCycles(t, unit), occupancy * t.IterationsPerPeriod(),
              fmt::format("{} {} busy cycles", name, UnitName(unit)));
    }

    for (int which = 0; which < 3; ++which) {
      MachineConfig slower = kPaper;
      int* field = which == 0   ? &slower.load_first_chunk_offset
                   : which == 1 ? &slower.alu_first_chunk_offset
                                : &slower.mac_first_chunk_offset;
      int previous = t.steady_period;
      for (int step = 0; step < 4; ++step) {
        ++*field;
        const int period = Simulate(p, slower, kIterations).steady_period;
        c.Expect(period >= previous, fmt::format("{} period shrinks with a longer offset", name));
        previous = period;
      }
    }

    const ReferenceKind kind = CorpusLookup(name).reference;
    for (int size : kRegisterFileSizes) {
      if (VregPressure(p) > size) continue;
      const RemapResult r = Remap(p, size);
      c.Expect(FitCheck(r.program, size).empty(), fmt::format("{} remap does not fit {}", name, size));
      MachineConfig small = kPaper;
      small.num_vregs = size;
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        OracleCase oc = RenameOracleCase(BuildOracleCase(p, kind, kPaper, seed, InputMode::kRandom),
                                         r.register_map);
        oc.init.v.resize(size);
        c.Expect(CheckOracle(r.program, oc, small).pass,
                 fmt::format("{} remapped into {} disagrees", name, size));
      }
    }
  }
}

void Criterion12(Check& c) {
  const auto v = FitCheck(CorpusProgram("gemm_m2"), 8);
  c.Expect(!v.empty() && v.front().message.find("v8-v9") != std::string::npos,
           "gemm_m2 fit 8 does not name v8-v9");
  try {
    ParseProgram(".vtype sew=8 lmul=2\nvwmacc.vx v2,x7,v8\nbne x1,x2,pc - 4\n");
    c.Expect(false, "misaligned v2 accepted");
  } catch (const Error& e) {
    c.Expect(e.kind() == ErrorKind::kParse, fmt::format("misaligned group: {}", e.what()));
  }
}

struct Criterion {
  const char* title;
  std::function<void(Check&)> run;
};

int Main() {
  const Criterion criteria[] = {
      {"matrix tile LMUL=2 (9 cycles, 8/9, 10 registers, row identity)", Criterion1},
      {"matrix tile LMUL=2 shared base (8 cycles, 100%, 10 registers)", Criterion2},
      {"matrix tile LMUL=1 (9 cycles, 4/9, 4 registers)", Criterion3},
      {"matrix tile LMUL=4 (16 cycles, 100%, 20 registers, idle slots)", Criterion4},
      {"accumulation (4 cycles, ALU and load 100%, 6 registers)", Criterion5},
      {"dot product (8 cycles, MAC 1/2, load 100%, 8 registers)", Criterion6},
      {"matrix by vector (9 cycles, 8/9, 12 registers)", Criterion7},
      {"results summary from analyze --all", Criterion8},
      {"register file fit at 16 and 8", Criterion9},
      {"oracle equivalence over 100 seeds", Criterion10},
      {"property suite", Criterion11},
      {"negative paths", Criterion12},
  };
  int failed = 0;
  int index = 0;
  for (const auto& criterion : criteria) {
    ++index;
    Check c;
    try {
      criterion.run(c);
    } catch (const std::exception& e) {
      c.Expect(false, fmt::format("exception: {}", e.what()));
    }
    const bool pass = c.problems().empty();
    if (!pass) ++failed;
    std::printf("[%s] %2d %s\n", pass ? "PASS" : "FAIL", index, criterion.title);
    for (const auto& p : c.problems()) std::printf("         %s\n", p.c_str());
  }
  std::printf("%d of %zu criteria passed\n", index - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace rvvsim

int main() { return rvvsim::Main(); }
