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

#ifndef RVVSIM_CORPUS_H_
#define RVVSIM_CORPUS_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rvvsim/analysis.h"
#include "rvvsim/asm_parser.h"
#include "rvvsim/isa.h"

namespace rvvsim {

struct EmbeddedFile {
  std::string_view name;
  std::string_view text;
};

// Generated at build time from corpus/.
namespace corpus_data {
const std::vector<EmbeddedFile>& Kernels();
std::string_view Manifest();
}  // namespace corpus_data

// Naive scalar computation a kernel is checked against.
enum class ReferenceKind { kGemmTile, kGemv, kAccumulate, kDot };

std::string_view ReferenceName(ReferenceKind kind);

struct ExpectedMetrics {
  int steady_period = 0;
  std::map<UnitClass, Rational> utilization;
  int vregs = 0;
};

struct CorpusEntry {
  std::string name;
  std::string description;
  std::string kernel_text;  // byte-identical to the shipped fixture
  VType vtype;
  // Published figures, not necessarily what the model produces.
  ExpectedMetrics expected;
  ReferenceKind reference = ReferenceKind::kGemmTile;
  // Unit whose utilization the summary reports.
  UnitClass critical_unit = UnitClass::kVectorMac;
  std::string note;

  Program Parse(const ParseOptions& options = {}) const;
};

const std::vector<CorpusEntry>& Corpus();

// Throws Error(kUnknownKernel).
const CorpusEntry& CorpusLookup(std::string_view name);

struct SummaryVariant {
  std::string kernel;
  std::optional<int> lmul;  // re-parse the listing at this LMUL

  std::string Label() const;
};

struct SummarySpec {
  std::string kernel;
  std::string data_size;
  int lmul = 1;
  std::vector<SummaryVariant> variants;
  std::string expected_vregs;
  std::string expected_percent;
  std::string comment;
};

const std::vector<SummarySpec>& SummarySpecs();

struct SummaryRow {
  SummarySpec spec;
  std::vector<UtilizationReport> reports;  // one per variant
  std::string vregs;    // "10", or "5 to 6" when variants differ
  std::string percent;  // critical-unit utilization, "89 to 100" for a range
};

std::vector<SummaryRow> Summarize(const MachineConfig& config, int iterations);

std::string RenderSummaryTable(const std::vector<SummaryRow>& rows);
std::string RenderSummaryCsv(const std::vector<SummaryRow>& rows);
nlohmann::json SummaryToJson(const std::vector<SummaryRow>& rows);

}  // namespace rvvsim

#endif  // RVVSIM_CORPUS_H_
