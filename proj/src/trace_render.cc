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

#include <algorithm>
#include <vector>

#include <fmt/format.h>

namespace rvvsim {
namespace {

constexpr std::string_view kStallText = "-              -";

struct WindowRows {
  std::span<const TraceRow> rows;
  int first_cycle = 0;
};

WindowRows Select(const Trace& trace, TraceWindow window) {
  if (window == TraceWindow::kFull || trace.steady_period == 0) {
    return {trace.rows, 0};
  }
  return {trace.SteadyWindow(), trace.window_start};
}

std::string IssueText(const TraceRow& row) {
  return row.issued ? row.issued->text : std::string(kStallText);
}

std::string UnitText(const TraceRow& row) {
  return row.issue_unit ? std::string(UnitName(*row.issue_unit)) : "-";
}

std::string CsvQuote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::optional<OutputFormat> ParseOutputFormat(std::string_view name) {
  if (name == "table") return OutputFormat::kTable;
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  return std::nullopt;
}

std::string RenderWriteCell(const TraceRow& row, UnitClass unit) {
  std::string cell;
  for (const auto& w : row.writes) {
    if (w.unit != unit) continue;
    cell += cell.empty() ? fmt::format("{}:", UnitTag(unit)) : ",";
    cell += fmt::format("v{}:{}", w.vreg, w.chunk);
  }
  return cell.empty() ? "." : cell;
}

std::string WriteColumnHeader(UnitClass unit) {
  return fmt::format("{}:{}", UnitName(unit), UnitTag(unit));
}

std::string RenderTraceTable(const Trace& trace, TraceWindow window) {
  const auto [rows, first_cycle] = Select(trace, window);

  std::vector<std::string> header = {"Cycle", "Instruction issued", "Unit"};
  for (UnitClass unit : trace.vector_units) header.push_back(WriteColumnHeader(unit));
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : rows) {
    std::vector<std::string> line = {fmt::format("{}", row.cycle - first_cycle),
                                     IssueText(row), UnitText(row)};
    for (UnitClass unit : trace.vector_units) line.push_back(RenderWriteCell(row, unit));
    cells.push_back(std::move(line));
  }

  std::vector<size_t> widths(header.size());
  for (size_t c = 0; c < header.size(); ++c) {
    widths[c] = header[c].size();
    for (const auto& line : cells) widths[c] = std::max(widths[c], line[c].size());
  }
  auto emit = [&](const std::vector<std::string>& line) {
    std::string out;
    for (size_t c = 0; c < line.size(); ++c) {
      if (c > 0) out += " | ";
      out += fmt::format("{:<{}}", line[c], widths[c]);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };

  std::string out = emit(header);
  std::string rule;
  for (size_t c = 0; c < widths.size(); ++c) {
    if (c > 0) rule += "-+-";
    rule += std::string(widths[c], '-');
  }
  out += rule + "\n";
  for (const auto& line : cells) out += emit(line);
  return out;
}

std::string RenderTraceCsv(const Trace& trace, TraceWindow window) {
  const auto [rows, first_cycle] = Select(trace, window);
  std::string out = "cycle,issued,unit,writes\n";
  for (const auto& row : rows) {
    std::string writes;
    for (UnitClass unit : trace.vector_units) {
      if (!row.HasWrites(unit)) continue;
      if (!writes.empty()) writes += ' ';
      writes += RenderWriteCell(row, unit);
    }
    out += fmt::format("{},{},{},{}\n", row.cycle - first_cycle, CsvQuote(IssueText(row)),
                       UnitText(row), CsvQuote(writes));
  }
  return out;
}

nlohmann::json TraceToJson(const Trace& trace, TraceWindow window) {
  const auto [rows, first_cycle] = Select(trace, window);
  nlohmann::json json_rows = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json writes = nlohmann::json::object();
    for (UnitClass unit : trace.vector_units) {
      nlohmann::json chunks = nlohmann::json::array();
      for (const auto& w : row.WritesBy(unit)) {
        chunks.push_back({{"vreg", w.vreg}, {"chunk", w.chunk}});
      }
      writes[std::string(UnitName(unit))] = chunks;
    }
    nlohmann::json issued = nullptr;
    if (row.issued) issued = {{"index", row.issued->index}, {"text", row.issued->text}};
    json_rows.push_back({{"cycle", row.cycle - first_cycle},
                         {"issued", issued},
                         {"unit", UnitText(row)},
                         {"writes", writes}});
  }
  const MachineConfig& c = trace.config;
  return {
      {"program", trace.program_name},
      {"vtype", {{"sew", trace.vtype.sew_bits}, {"lmul", trace.vtype.lmul}}},
      {"config",
       {{"vlen_bits", c.vlen_bits},
        {"dlen_bits", c.dlen_bits},
        {"num_vregs", c.num_vregs},
        {"load_first_chunk_offset", c.load_first_chunk_offset},
        {"alu_first_chunk_offset", c.alu_first_chunk_offset},
        {"mac_first_chunk_offset", c.mac_first_chunk_offset},
        {"scalar_load_latency", c.scalar_load_latency},
        {"load_chunks_per_cycle", c.load_chunks_per_cycle},
        {"wide_chunks_per_cycle", c.wide_chunks_per_cycle},
        {"issue_width", c.issue_width}}},
      {"iterations", trace.iterations},
      {"warmup_cycles", trace.warmup_cycles},
      {"steady_period", trace.steady_period},
      {"window", window == TraceWindow::kFull ? "full" : "steady"},
      {"rows", json_rows},
  };
}

std::string RenderTrace(const Trace& trace, OutputFormat format, TraceWindow window) {
  switch (format) {
    case OutputFormat::kTable: return RenderTraceTable(trace, window);
    case OutputFormat::kCsv: return RenderTraceCsv(trace, window);
    case OutputFormat::kJson: return TraceToJson(trace, window).dump(2) + "\n";
  }
  return {};
}

}  // namespace rvvsim
