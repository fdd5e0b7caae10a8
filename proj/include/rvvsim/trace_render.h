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

#ifndef RVVSIM_TRACE_RENDER_H_
#define RVVSIM_TRACE_RENDER_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "rvvsim/timing_sim.h"

namespace rvvsim {

enum class OutputFormat { kTable, kCsv, kJson };

std::optional<OutputFormat> ParseOutputFormat(std::string_view name);

enum class TraceWindow {
  kSteady,  // one period starting at a loop-head issue, cycles renumbered from 0
  kFull,    // every simulated cycle
};

// "M:v1:0,v1:1" for the unit's writes in `row`, "." when there are none.
std::string RenderWriteCell(const TraceRow& row, UnitClass unit);

// Column header for a unit's writes, e.g. "VMAC:M".
std::string WriteColumnHeader(UnitClass unit);

std::string RenderTraceTable(const Trace& trace, TraceWindow window);
std::string RenderTraceCsv(const Trace& trace, TraceWindow window);
nlohmann::json TraceToJson(const Trace& trace, TraceWindow window);

std::string RenderTrace(const Trace& trace, OutputFormat format, TraceWindow window);

}  // namespace rvvsim

#endif  // RVVSIM_TRACE_RENDER_H_
