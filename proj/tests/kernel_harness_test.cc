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

#include <set>
#include <string>

#include <gtest/gtest.h>

#include "rvvsim/analysis.h"
#include "rvvsim/errors.h"
#include "rvvsim/timing_sim.h"
#include "test_util.h"

namespace rvvsim {
namespace {

using ::rvvsim::testing::CorpusProgram;
using ::rvvsim::testing::kCorpusNames;

const MachineConfig kPaper = MachineConfig::Paper();

ReferenceKind KindOf(const std::string& name) { return CorpusLookup(name).reference; }

TEST(WrapSigned, TwosComplement) {
  EXPECT_EQ(WrapSigned(32768, 16), -32768);
  EXPECT_EQ(WrapSigned(-32769, 16), 32767);
  EXPECT_EQ(WrapSigned(65536 + 5, 16), 5);
  EXPECT_EQ(WrapSigned(-1, 32), -1);
  EXPECT_EQ(WrapSigned(std::int64_t{1} << 31, 32), -(std::int64_t{1} << 31));
}

TEST(References, GemmTileByHand) {
  const Matrix a = {{1, 2}, {-1, 3}};
  const Matrix b = {{10, 20, 30}, {1, 2, 3}};
  const Matrix c = {{0, 0, 0}, {100, 100, 100}};
  const Matrix out = GemmTileReference(a, b, c, 16);
  EXPECT_EQ(out, (Matrix{{12, 24, 36}, {93, 86, 79}}));
  EXPECT_EQ(GemmTileReference({{-128}}, {{-128}}, {{32767}}, 16), (Matrix{{-16385}}));
}

TEST(References, GemvByHand) {
  // y[j] += sum_k x[k] * m[k][j]
  const Matrix m = {{1, 2}, {3, 4}, {5, 6}};
  EXPECT_EQ(GemvReference(m, {1, 0, -1}, {7, 7}, 16), (std::vector<std::int64_t>{3, 3}));
}

TEST(References, AccumulateByHand) {
  EXPECT_EQ(AccumulateReference({1, 2, 3, 4, 5, 6}, {0, 10}, 32),
            (std::vector<std::int64_t>{9, 22}));
  EXPECT_EQ(AccumulateReference({1}, {2147483647}, 32), (std::vector<std::int64_t>{-2147483648}));
}

TEST(References, DotLanesByHand) {
  EXPECT_EQ(DotLanesReference({1, 2, 3, 4}, {5, 6, 7, 8}, {0, 1}, 32),
            (std::vector<std::int64_t>{5 + 21, 1 + 12 + 32}));
}

TEST(ParseInputMode, Names) {
  EXPECT_EQ(ParseInputMode("random"), InputMode::kRandom);
  EXPECT_EQ(ParseInputMode("zero"), InputMode::kZero);
  EXPECT_EQ(ParseInputMode("extreme"), InputMode::kExtreme);
  EXPECT_FALSE(ParseInputMode("big").has_value());
}

TEST(UnpackLanes, SignedLittleEndian) {
  EXPECT_EQ(UnpackLanes({0xff, 0x7f, 0x00, 0x80}, 16), (std::vector<std::int64_t>{32767, -32768}));
  EXPECT_EQ(UnpackLanes({0xfe}, 8), (std::vector<std::int64_t>{-2}));
}

class CorpusOracle : public ::testing::TestWithParam<const char*> {};

TEST_P(CorpusOracle, HundredSeedsPerInputMode) {
  const std::string name = GetParam();
  const Program p = CorpusProgram(name);
  for (InputMode mode : {InputMode::kRandom, InputMode::kZero, InputMode::kExtreme}) {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const OracleCase c = BuildOracleCase(p, KindOf(name), kPaper, seed, mode);
      ASSERT_FALSE(c.expected.empty());
      const OracleResult r = CheckOracle(p, c, kPaper);
      ASSERT_TRUE(r.pass) << name << " seed " << seed << ": " << r.detail;
    }
  }
}

TEST_P(CorpusOracle, SameSeedSameCase) {
  const std::string name = GetParam();
  const Program p = CorpusProgram(name);
  const OracleCase a = BuildOracleCase(p, KindOf(name), kPaper, 42, InputMode::kRandom);
  const OracleCase b = BuildOracleCase(p, KindOf(name), kPaper, 42, InputMode::kRandom);
  EXPECT_EQ(a.init, b.init);
  EXPECT_EQ(a.bindings, b.bindings);
  EXPECT_EQ(a.trip_count, b.trip_count);
}

TEST_P(CorpusOracle, ExplicitTripCount) {
  const std::string name = GetParam();
  const Program p = CorpusProgram(name);
  const OracleCase c = BuildOracleCase(p, KindOf(name), kPaper, 3, InputMode::kRandom, 20);
  EXPECT_EQ(c.trip_count, 20);
  EXPECT_TRUE(CheckOracle(p, c, kPaper).pass);
}

TEST_P(CorpusOracle, ExecutorWritesOnlyWhatTheTraceWrites) {
  const std::string name = GetParam();
  const Program p = CorpusProgram(name);
  const Trace t = Simulate(p, kPaper, 12);
  std::set<int> timed;
  for (const auto& row : t.rows) {
    for (const auto& w : row.writes) timed.insert(w.vreg);
  }
  const OracleCase c = BuildOracleCase(p, KindOf(name), kPaper, 11, InputMode::kRandom);
  const OracleResult r = CheckOracle(p, c, kPaper);
  ASSERT_TRUE(r.pass);
  for (int v = 0; v < kPaper.num_vregs; ++v) {
    if (r.final_state.v[v] != c.init.v[v]) EXPECT_TRUE(timed.count(v)) << name << " v" << v;
  }
  for (const auto& e : c.expected) {
    for (int v = e.group.base; v < e.group.end(); ++v) EXPECT_TRUE(timed.count(v)) << v;
  }
}

TEST_P(CorpusOracle, RemapPreservesResults) {
  const std::string name = GetParam();
  const Program p = CorpusProgram(name);
  for (int size : kRegisterFileSizes) {
    if (VregPressure(p) > size) continue;
    const RemapResult remap = Remap(p, size);
    MachineConfig small = kPaper;
    small.num_vregs = size;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const OracleCase original = BuildOracleCase(p, KindOf(name), kPaper, seed, InputMode::kRandom);
      OracleCase renamed = RenameOracleCase(original, remap.register_map);
      renamed.init.v.resize(size);
      const OracleResult r = CheckOracle(remap.program, renamed, small);
      ASSERT_TRUE(r.pass) << name << " into " << size << ": " << r.detail;
      const OracleResult o = CheckOracle(p, original, kPaper);
      for (const auto& [from, to] : remap.register_map) {
        EXPECT_EQ(r.final_state.v[to], o.final_state.v[from]) << name << " v" << from;
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Corpus, CorpusOracle, ::testing::ValuesIn(kCorpusNames),
                         [](const auto& info) { return std::string(info.param); });

TEST(CheckOracle, DetectsAWrongScalarOperand) {
  const Program good = CorpusProgram("gemm_m2");
  Program bad = good;
  std::get<ScalarReg>(bad.instructions[3].sources[0]).index = 8;  // row 0 uses row 1's sample
  int caught = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const OracleCase c = BuildOracleCase(good, ReferenceKind::kGemmTile, kPaper, seed, InputMode::kRandom);
    if (!CheckOracle(bad, c, kPaper).pass) ++caught;
  }
  EXPECT_EQ(caught, 20);
}

TEST(CheckOracle, DetectsAWrongStride) {
  const Program good = CorpusProgram("accum_m2");
  Program bad = good;
  std::get<Immediate>(bad.instructions[2].sources[1]).value = 8;
  int caught = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const OracleCase c = BuildOracleCase(good, ReferenceKind::kAccumulate, kPaper, seed, InputMode::kRandom);
    try {
      if (!CheckOracle(bad, c, kPaper).pass) ++caught;
    } catch (const Error&) {
      ++caught;
    }
  }
  EXPECT_EQ(caught, 20);
}

TEST(CheckOracle, DetectsACorruptedExpectation) {
  const Program p = CorpusProgram("dot_m2");
  OracleCase c = BuildOracleCase(p, ReferenceKind::kDot, kPaper, 5, InputMode::kRandom);
  c.expected[0].lanes[3] += 1;
  const OracleResult r = CheckOracle(p, c, kPaper);
  EXPECT_FALSE(r.pass);
  EXPECT_NE(r.detail.find("lane 3"), std::string::npos) << r.detail;
}

TEST(BuildOracleCase, RejectsKernelsOutsideTheReference) {
  const Program p = CorpusProgram("dot_m2");
  EXPECT_THROW(BuildOracleCase(p, ReferenceKind::kGemmTile, kPaper, 1, InputMode::kRandom), Error);
  const Program no_counter =
      ParseProgram(".vtype sew=8 lmul=1\nvle8.v v0,(a0)\nbne a1,a2,pc - 4\n");
  EXPECT_THROW(BuildOracleCase(no_counter, ReferenceKind::kGemmTile, kPaper, 1, InputMode::kRandom),
               Error);
}

TEST(RenameVectorRegisters, MovesContents) {
  ArchState s = ArchState::Create(kPaper);
  s.v[0][0] = 1;
  s.v[4][0] = 2;
  const ArchState r = RenameVectorRegisters(s, {{0, 4}, {4, 0}});
  EXPECT_EQ(r.v[4][0], 1);
  EXPECT_EQ(r.v[0][0], 2);
}

}  // namespace
}  // namespace rvvsim
