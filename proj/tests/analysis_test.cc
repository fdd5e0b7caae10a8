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

#include <set>
#include <string>

#include <gtest/gtest.h>

#include "rvvsim/errors.h"
#include "rvvsim/timing_sim.h"
#include "test_util.h"

namespace rvvsim {
namespace {

using ::rvvsim::testing::CorpusProgram;
using ::rvvsim::testing::kCorpusNames;

const MachineConfig kPaper = MachineConfig::Paper();

std::string RemapError(const char* kernel, int vregs) {
  try {
    Remap(CorpusProgram(kernel), vregs);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasible);
    return e.what();
  }
  ADD_FAILURE() << kernel << " remapped into " << vregs;
  return {};
}

TEST(Utilization, MatrixTile) {
  const Trace t = Simulate(CorpusProgram("gemm_m2"), kPaper, 12);
  EXPECT_EQ(BusyCycles(t, UnitClass::kVectorMac), 8);
  EXPECT_EQ(Utilization(t, UnitClass::kVectorMac), Rational(8, 9));
  EXPECT_EQ(Utilization(t, UnitClass::kVectorLoad), Rational(4, 9));
  EXPECT_EQ(Utilization(t, UnitClass::kVectorAlu), Rational(0));
  EXPECT_EQ(Utilization(t, UnitClass::kScalarAlu), Rational(3, 9));
  EXPECT_EQ(Utilization(t, UnitClass::kBranch), Rational(1, 9));
  EXPECT_EQ(Utilization(t, UnitClass::kScalarLoad), Rational(2, 9));
}

TEST(Utilization, EmptyTraceHasNoSteadyState) {
  const Trace t = Simulate(ParseProgram(".vtype sew=8 lmul=1\n"), kPaper, 3);
  EXPECT_THROW(Utilization(t, UnitClass::kVectorMac), Error);
}

TEST(VregPressure, CorpusKernels) {
  EXPECT_EQ(VregPressure(CorpusProgram("gemm_m2")), 10);
  EXPECT_EQ(VregPressure(CorpusProgram("gemm_m2_b")), 10);
  EXPECT_EQ(VregPressure(CorpusProgram("gemm_m1")), 5);
  EXPECT_EQ(VregPressure(CorpusProgram("gemm_m4")), 20);
  EXPECT_EQ(VregPressure(CorpusProgram("accum_m2")), 6);
  EXPECT_EQ(VregPressure(CorpusProgram("dot_m2")), 8);
  EXPECT_EQ(VregPressure(CorpusProgram("gemv_m4")), 12);
  EXPECT_EQ(VregPressure(ParseProgram(".vtype sew=8 lmul=1\nbne a0,a1,pc - 4\n")), 0);
}

TEST(FitCheck, NamesTheFirstGroupThatDoesNotFit) {
  const auto v = FitCheck(CorpusProgram("gemm_m2"), 8);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.front().instruction, 0);
  EXPECT_EQ(v.front().group, (RegGroup{8, 2}));
  EXPECT_NE(v.front().message.find("v8-v9"), std::string::npos) << v.front().message;
  EXPECT_TRUE(FitCheck(CorpusProgram("gemm_m2"), 16).empty());
}

TEST(FitCheck, WideTileNeedsThirtyTwo) {
  const auto v = FitCheck(CorpusProgram("gemm_m4"), 16);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.front().group, (RegGroup{16, 4}));
}

TEST(Remap, AlreadyCompactIsUnchanged) {
  const RemapResult r = Remap(CorpusProgram("gemv_m4"), 16);
  EXPECT_FALSE(r.changed);
  EXPECT_EQ(r.program, CorpusProgram("gemv_m4"));
  EXPECT_EQ(r.register_map.size(), 12u);
  for (const auto& [from, to] : r.register_map) EXPECT_EQ(from, to);
}

TEST(Remap, InfeasibleReportsWhy) {
  EXPECT_NE(RemapError("gemm_m2", 8).find("register pressure 10 > 8"), std::string::npos);
  EXPECT_NE(RemapError("gemm_m4", 16).find("register pressure 20 > 16"), std::string::npos);
}

TEST(Remap, PacksMixedWidthsTightly) {
  const Program p = ParseProgram(
      ".vtype sew=8 lmul=2\n"
      "vle8.v v8,(x28)\n"
      "vwmacc.vx v4,x7,v8\n"
      "vle8.v v10,(x28)\n"
      "bne x1,x2,pc - 12\n");
  EXPECT_EQ(VregPressure(p), 8);
  EXPECT_NO_THROW(Remap(p, 8));
  const Program q = ParseProgram(
      ".vtype sew=8 lmul=1\n"
      "vle8.v v9,(x28)\n"
      "vwmacc.vx v2,x7,v9\n"
      "vwmacc.vx v4,x7,v9\n"
      "vwmacc.vx v6,x7,v9\n"
      "bne x1,x2,pc - 16\n");
  EXPECT_EQ(VregPressure(q), 7);
  const RemapResult r = Remap(q, 8);
  EXPECT_TRUE(FitCheck(r.program, 8).empty());
}

TEST(Remap, RepacksToTheLowestRegisters) {
  const Program p = CorpusProgram("accum_m2");
  const RemapResult r = Remap(p, 8);
  EXPECT_TRUE(r.changed);
  EXPECT_TRUE(FitCheck(r.program, 8).empty());
  EXPECT_EQ(VregPressure(r.program), 6);
  EXPECT_EQ(r.register_map.at(0), 4);
  EXPECT_EQ(r.register_map.at(4), 0);
  // Scalar side and timing are untouched by renaming.
  MachineConfig small = kPaper;
  small.num_vregs = 8;
  EXPECT_EQ(Simulate(r.program, small, 12).steady_period,
            Simulate(p, kPaper, 12).steady_period);
}

TEST(Remap, MapIsInjectiveAndKeepsGroupsAligned) {
  for (const char* name : kCorpusNames) {
    const Program p = CorpusProgram(name);
    for (int size : kRegisterFileSizes) {
      if (VregPressure(p) > size) continue;
      RemapResult r;
      try {
        r = Remap(p, size);
      } catch (const Error&) {
        continue;
      }
      std::set<int> targets;
      for (const auto& [from, to] : r.register_map) targets.insert(to);
      EXPECT_EQ(targets.size(), r.register_map.size()) << name << " " << size;
      EXPECT_TRUE(FitCheck(r.program, size).empty()) << name << " " << size;
    }
  }
}

TEST(RenderPercent, RoundsHalfUp) {
  EXPECT_EQ(RenderPercent(Rational(8, 9)), "89");
  EXPECT_EQ(RenderPercent(Rational(4, 9)), "44");
  EXPECT_EQ(RenderPercent(Rational(1, 2)), "50");
  EXPECT_EQ(RenderPercent(Rational(1)), "100");
  EXPECT_EQ(RenderPercent(Rational(1, 200)), "1");
  EXPECT_EQ(RenderPercent(Rational(1, 201)), "0");
  EXPECT_EQ(RenderPercent(Rational(0)), "0");
}

TEST(RenderRational, Forms) {
  EXPECT_EQ(RenderRational(Rational(8, 9)), "8/9");
  EXPECT_EQ(RenderRational(Rational(8, 8)), "1");
  EXPECT_EQ(RenderRational(Rational(4)), "4");
}

TEST(Analyze, ReportFields) {
  const UtilizationReport r = Analyze(CorpusProgram("dot_m2"), kPaper, 12);
  EXPECT_EQ(r.kernel, "dot_m2");
  EXPECT_EQ(r.lmul, 2);
  EXPECT_EQ(r.steady_period, 8);
  EXPECT_EQ(r.vregs_used, 8);
  EXPECT_EQ(r.chaining_ratio, Rational(4));
  ASSERT_NE(r.Find(UnitClass::kVectorMac), nullptr);
  EXPECT_EQ(r.Find(UnitClass::kVectorMac)->utilization, Rational(1, 2));
  EXPECT_EQ(r.Find(UnitClass::kVectorLoad)->utilization, Rational(1));
  EXPECT_EQ(r.Find(UnitClass::kVectorAlu), nullptr);
  EXPECT_TRUE(r.fits.at(8));
  EXPECT_TRUE(r.fits.at(16));

  const nlohmann::json j = ReportToJson(r);
  for (const char* key : {"kernel", "lmul", "steady_period", "warmup_cycles", "units",
                          "vregs_used", "chaining_ratio", "fits"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["units"][0]["id"], "vector_mac");
  EXPECT_EQ(j["units"][0]["utilization"], "1/2");
  EXPECT_EQ(j["units"][0]["percent"], 50);
  EXPECT_EQ(j["chaining_ratio"], "4");

  const std::string table = RenderReportTable(r);
  EXPECT_NE(table.find("VMAC            4 of 8 cycles = 1/2 (50%)"), std::string::npos) << table;
  EXPECT_NE(table.find("8: yes  16: yes  32: yes"), std::string::npos) << table;
}

}  // namespace
}  // namespace rvvsim
