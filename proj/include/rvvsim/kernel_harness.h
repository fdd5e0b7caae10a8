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

#ifndef RVVSIM_KERNEL_HARNESS_H_
#define RVVSIM_KERNEL_HARNESS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rvvsim/asm_parser.h"
#include "rvvsim/corpus.h"
#include "rvvsim/golden_exec.h"

// Naive scalar references for the corpus kernels and the input generator
// that drives golden-exec against them.

namespace rvvsim {

using Matrix = std::vector<std::vector<std::int64_t>>;

// Two's-complement wrap of value to `bits` bits.
std::int64_t WrapSigned(std::int64_t value, int bits);

// c[r][j] += sum_k a[r][k] * b[k][j]
Matrix GemmTileReference(const Matrix& a, const Matrix& b, Matrix c, int acc_bits);
// y[i] += sum_k m[k][i] * x[k]
std::vector<std::int64_t> GemvReference(const Matrix& m, const std::vector<std::int64_t>& x,
                                        std::vector<std::int64_t> y, int acc_bits);
// lanes[i % L] += samples[i]
std::vector<std::int64_t> AccumulateReference(const std::vector<std::int64_t>& samples,
                                              std::vector<std::int64_t> lanes, int acc_bits);
// lanes[i % L] += a[i] * b[i]; summing the lanes gives the dot product.
std::vector<std::int64_t> DotLanesReference(const std::vector<std::int64_t>& a,
                                            const std::vector<std::int64_t>& b,
                                            std::vector<std::int64_t> lanes, int acc_bits);

enum class InputMode {
  kRandom,
  kZero,
  kExtreme,  // bytes and accumulators drawn from the signed limits
};

std::optional<InputMode> ParseInputMode(std::string_view name);

struct ExpectedGroup {
  RegGroup group;
  std::vector<std::int64_t> lanes;
  int lane_bits = 16;
};

struct OracleCase {
  ArchState init;
  Bindings bindings;
  int trip_count = 0;
  std::int64_t max_steps = 0;
  std::vector<ExpectedGroup> expected;
};

// Builds a run of `program` with generated inputs and the reference result.
// Loop counter, bound, pointers and strides are read off the listing, so
// remapped or re-scheduled variants of a kernel work unchanged.
// trip_count 0 picks one from the seed. Throws Error(kExec) when the listing
// does not have the shape `kind` expects.
OracleCase BuildOracleCase(const Program& program, ReferenceKind kind,
                           const MachineConfig& config, std::uint64_t seed, InputMode mode,
                           int trip_count = 0);

struct OracleResult {
  bool pass = false;
  std::string detail;
  ArchState final_state;
};

OracleResult CheckOracle(const Program& program, const OracleCase& oracle,
                         const MachineConfig& config);

// Moves vector register r to map[r]; registers missing from the map stay.
ArchState RenameVectorRegisters(const ArchState& state, const std::map<int, int>& map);
OracleCase RenameOracleCase(const OracleCase& oracle, const std::map<int, int>& map);

// Signed lanes of `bits` bits packed little-endian in `bytes`.
std::vector<std::int64_t> UnpackLanes(const std::vector<std::uint8_t>& bytes, int bits);

}  // namespace rvvsim

#endif  // RVVSIM_KERNEL_HARNESS_H_
