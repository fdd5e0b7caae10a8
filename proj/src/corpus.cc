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

#include "rvvsim/corpus.h"

#include <algorithm>

#include <fmt/format.h>

#include "rvvsim/errors.h"

namespace rvvsim {
namespace {

ReferenceKind ParseReference(const std::string& name) {
  if (name == "gemm_tile") return ReferenceKind::kGemmTile;
  if (name == "gemv") return ReferenceKind::kGemv;
  if (name == "accumulate") return ReferenceKind::kAccumulate;
  if (name == "dot") return ReferenceKind::kDot;
  throw Error(ErrorKind::kParse, fmt::format("manifest: unknown reference '{}'", name));
}

UnitClass ParseUnit(const std::string& id) {
  const auto unit = UnitFromId(id);
  if (!unit) throw Error(ErrorKind::kParse, fmt::format("manifest: unknown unit '{}'", id));
  return *unit;
}

Rational ParseRational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(std::stoll(text));
  return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
}

std::string_view KernelText(std::string_view name) {
  for (const auto& file : corpus_data::Kernels()) {
    if (file.name == name) return file.text;
  }
  throw Error(ErrorKind::kParse, fmt::format("manifest names missing fixture '{}'", name));
}

struct Manifest {
  std::vector<CorpusEntry> entries;
  std::vector<SummarySpec> summary;
};

Manifest LoadManifest() {
  Manifest manifest;
  const auto json = nlohmann::json::parse(corpus_data::Manifest());
  for (const auto& k : json.at("kernels")) {
    CorpusEntry entry;
    entry.name = k.at("name").get<std::string>();
    entry.description = k.at("description").get<std::string>();
    entry.kernel_text = std::string(KernelText(entry.name));
    entry.vtype = ParseProgram(entry.kernel_text).vtype;
    entry.reference = ParseReference(k.at("reference").get<std::string>());
    entry.critical_unit = ParseUnit(k.at("critical_unit").get<std::string>());
    entry.note = k.value("note", "");
    const auto& expected = k.at("expected");
    entry.expected.steady_period = expected.at("steady_period").get<int>();
    entry.expected.vregs = expected.at("vregs").get<int>();
    for (const auto& [unit, value] : expected.at("utilization").items()) {
      entry.expected.utilization[ParseUnit(unit)] = ParseRational(value.get<std::string>());
    }
    manifest.entries.push_back(std::move(entry));
  }
  for (const auto& s : json.at("summary")) {
    SummarySpec spec;
    spec.kernel = s.at("kernel").get<std::string>();
    spec.data_size = s.at("data_size").get<std::string>();
    spec.lmul = s.at("lmul").get<int>();
    for (const auto& v : s.at("variants")) {
      SummaryVariant variant{v.at("kernel").get<std::string>(), std::nullopt};
      if (v.contains("lmul")) variant.lmul = v.at("lmul").get<int>();
      spec.variants.push_back(std::move(variant));
    }
    spec.expected_vregs = s.at("expected_vregs").get<std::string>();
    spec.expected_percent = s.at("expected_percent").get<std::string>();
    spec.comment = s.value("comment", "");
    manifest.summary.push_back(std::move(spec));
  }
  return manifest;
}

const Manifest& GetManifest() {
  static const Manifest manifest = LoadManifest();
  return manifest;
}

// "a" when lo == hi, else "lo to hi".
std::string Range(int lo, int hi) {
  return lo == hi ? fmt::format("{}", lo) : fmt::format("{} to {}", lo, hi);
}

}  // namespace

std::string_view ReferenceName(ReferenceKind kind) {
  switch (kind) {
    case ReferenceKind::kGemmTile: return "gemm_tile";
    case ReferenceKind::kGemv: return "gemv";
    case ReferenceKind::kAccumulate: return "accumulate";
    case ReferenceKind::kDot: return "dot";
  }
  return "?";
}

Program CorpusEntry::Parse(const ParseOptions& options) const {
  return ParseProgram(kernel_text, options);
}

const std::vector<CorpusEntry>& Corpus() { return GetManifest().entries; }

const CorpusEntry& CorpusLookup(std::string_view name) {
  for (const auto& entry : Corpus()) {
    if (entry.name == name) return entry;
  }
  throw Error(ErrorKind::kUnknownKernel, fmt::format("no corpus kernel named '{}'", name));
}

std::string SummaryVariant::Label() const {
  return lmul ? fmt::format("{}@lmul={}", kernel, *lmul) : kernel;
}

const std::vector<SummarySpec>& SummarySpecs() { return GetManifest().summary; }

std::vector<SummaryRow> Summarize(const MachineConfig& config, int iterations) {
  std::vector<SummaryRow> rows;
  for (const SummarySpec& spec : SummarySpecs()) {
    SummaryRow row;
    row.spec = spec;
    int min_regs = kMaxVectorRegs + 1, max_regs = 0;
    int min_pct = 101, max_pct = -1;
    for (const SummaryVariant& variant : spec.variants) {
      const CorpusEntry& entry = CorpusLookup(variant.kernel);
      ParseOptions options;
      if (variant.lmul) options.vtype_override = VType{entry.vtype.sew_bits, *variant.lmul};
      Program program = entry.Parse(options);
      program.name = variant.Label();
      UtilizationReport report = Analyze(program, config, iterations);
      const UnitUsage* usage = report.Find(entry.critical_unit);
      const int pct = usage ? std::stoi(RenderPercent(usage->utilization)) : 0;
      min_pct = std::min(min_pct, pct);
      max_pct = std::max(max_pct, pct);
      min_regs = std::min(min_regs, report.vregs_used);
      max_regs = std::max(max_regs, report.vregs_used);
      row.reports.push_back(std::move(report));
    }
    row.vregs = Range(min_regs, max_regs);
    row.percent = Range(min_pct, max_pct);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string RenderSummaryTable(const std::vector<SummaryRow>& rows) {
  std::vector<std::vector<std::string>> cells = {
      {"Kernel", "Data size", "LMUL", "Vector registers used", "Utilization, %", "Variants",
       "Comment"}};
  for (const auto& row : rows) {
    std::string variants;
    for (const auto& v : row.spec.variants) {
      variants += (variants.empty() ? "" : ", ") + v.Label();
    }
    cells.push_back({row.spec.kernel, row.spec.data_size, fmt::format("{}", row.spec.lmul),
                     row.vregs, row.percent, variants, row.spec.comment});
  }
  std::vector<size_t> widths(cells.front().size(), 0);
  for (const auto& line : cells) {
    for (size_t c = 0; c < line.size(); ++c) widths[c] = std::max(widths[c], line[c].size());
  }
  std::string out;
  for (size_t r = 0; r < cells.size(); ++r) {
    std::string line;
    for (size_t c = 0; c < cells[r].size(); ++c) {
      if (c > 0) line += " | ";
      line += fmt::format("{:<{}}", cells[r][c], widths[c]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
    if (r == 0) {
      std::string rule;
      for (size_t c = 0; c < widths.size(); ++c) {
        if (c > 0) rule += "-+-";
        rule += std::string(widths[c], '-');
      }
      out += rule + "\n";
    }
  }
  return out;
}

std::string RenderSummaryCsv(const std::vector<SummaryRow>& rows) {
  std::string out = "kernel,data_size,lmul,vregs,percent,variants,comment\n";
  for (const auto& row : rows) {
    std::string variants;
    for (const auto& v : row.spec.variants) {
      variants += (variants.empty() ? "" : " ") + v.Label();
    }
    out += fmt::format("\"{}\",\"{}\",{},\"{}\",\"{}\",\"{}\",\"{}\"\n", row.spec.kernel,
                       row.spec.data_size, row.spec.lmul, row.vregs, row.percent, variants,
                       row.spec.comment);
  }
  return out;
}

nlohmann::json SummaryToJson(const std::vector<SummaryRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json variants = nlohmann::json::array();
    for (size_t i = 0; i < row.spec.variants.size(); ++i) {
      nlohmann::json report = ReportToJson(row.reports[i]);
      report["variant"] = row.spec.variants[i].Label();
      variants.push_back(std::move(report));
    }
    out.push_back({{"kernel", row.spec.kernel},
                   {"data_size", row.spec.data_size},
                   {"lmul", row.spec.lmul},
                   {"vregs", row.vregs},
                   {"percent", row.percent},
                   {"comment", row.spec.comment},
                   {"variants", variants}});
  }
  return {{"rows", out}};
}

}  // namespace rvvsim
