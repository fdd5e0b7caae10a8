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

#include "rvvsim/trace_render.h"

#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.h"

namespace rvvsim {
namespace {

using ::rvvsim::testing::CorpusProgram;

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

Trace SimulateKernel(const char* name) { return Simulate(CorpusProgram(name), MachineConfig::Paper(), 12); }

TEST(ParseOutputFormat, KnownNames) {
  EXPECT_EQ(ParseOutputFormat("table"), OutputFormat::kTable);
  EXPECT_EQ(ParseOutputFormat("csv"), OutputFormat::kCsv);
  EXPECT_EQ(ParseOutputFormat("json"), OutputFormat::kJson);
  EXPECT_FALSE(ParseOutputFormat("yaml").has_value());
}

TEST(RenderTraceTable, MatrixTileWindow) {
  const auto lines = Lines(RenderTraceTable(SimulateKernel("gemm_m2"), TraceWindow::kSteady));
  ASSERT_EQ(lines.size(), 11u);
  EXPECT_NE(lines[0].find("VMAC:M"), std::string::npos);
  EXPECT_NE(lines[0].find("VLOAD:L"), std::string::npos);
  EXPECT_EQ(lines[0].find("ALU:A"), std::string::npos);
  EXPECT_EQ(lines[2].rfind("0 ", 0), 0u);
  EXPECT_NE(lines[2].find("vle8.v"), std::string::npos);
  EXPECT_NE(lines[2].find("M:v1:0,v1:1"), std::string::npos);
  EXPECT_NE(lines[2].find("L:v8:0"), std::string::npos);
  EXPECT_NE(lines[10].find("bne"), std::string::npos);
  EXPECT_NE(lines[10].find("Scalar"), std::string::npos);
}

TEST(RenderTraceTable, StallRowsUseDashes) {
  const auto lines = Lines(RenderTraceTable(SimulateKernel("gemm_m4"), TraceWindow::kSteady));
  ASSERT_EQ(lines.size(), 18u);
  const std::string& stall = lines[2 + 3];
  EXPECT_NE(stall.find("-              -"), std::string::npos) << stall;
  EXPECT_NE(stall.find("M:v8:0,v8:1"), std::string::npos) << stall;
}

TEST(RenderTraceTable, FullWindowCoversEveryCycle) {
  const Trace t = SimulateKernel("accum_m2");
  EXPECT_EQ(Lines(RenderTraceTable(t, TraceWindow::kFull)).size(), t.rows.size() + 2);
}

TEST(RenderTraceCsv, HeaderAndQuoting) {
  const auto lines = Lines(RenderTraceCsv(SimulateKernel("gemm_m2"), TraceWindow::kSteady));
  ASSERT_EQ(lines.size(), 10u);
  EXPECT_EQ(lines[0], "cycle,issued,unit,writes");
  EXPECT_EQ(lines[1].substr(0, 3), "0,\"");
  EXPECT_NE(lines[1].find("\"M:v1:0,v1:1 L:v8:0\""), std::string::npos) << lines[1];
  EXPECT_NE(lines[8].find(",\"\""), std::string::npos) << lines[8];
}

TEST(TraceToJson, Shape) {
  const nlohmann::json j = TraceToJson(SimulateKernel("dot_m2"), TraceWindow::kSteady);
  EXPECT_EQ(j["program"], "dot_m2");
  EXPECT_EQ(j["steady_period"], 8);
  EXPECT_EQ(j["window"], "steady");
  EXPECT_EQ(j["vtype"]["sew"], 16);
  EXPECT_EQ(j["config"]["vlen_bits"], 64);
  ASSERT_EQ(j["rows"].size(), 8u);
  const auto& row0 = j["rows"][0];
  EXPECT_EQ(row0["cycle"], 0);
  EXPECT_EQ(row0["issued"]["index"], 0);
  EXPECT_TRUE(row0["writes"].contains("VMAC"));
  EXPECT_TRUE(row0["writes"].contains("VLOAD"));
}

TEST(TraceToJson, StallRowHasNullIssue) {
  const nlohmann::json j = TraceToJson(SimulateKernel("gemm_m4"), TraceWindow::kSteady);
  EXPECT_TRUE(j["rows"][3]["issued"].is_null());
  EXPECT_EQ(j["rows"][3]["unit"], "-");
}

TEST(RenderTrace, DispatchesOnFormat) {
  const Trace t = SimulateKernel("accum_m2");
  EXPECT_EQ(RenderTrace(t, OutputFormat::kCsv, TraceWindow::kSteady),
            RenderTraceCsv(t, TraceWindow::kSteady));
  EXPECT_EQ(nlohmann::json::parse(RenderTrace(t, OutputFormat::kJson, TraceWindow::kFull)),
            TraceToJson(t, TraceWindow::kFull));
}

}  // namespace
}  // namespace rvvsim
