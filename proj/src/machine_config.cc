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

#include "rvvsim/machine_config.h"

#include <array>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "rvvsim/errors.h"

namespace rvvsim {
namespace {

struct Field {
  std::string_view key;
  int MachineConfig::*member;
};

constexpr std::array<Field, 10> kFields = {{
    {"vlen_bits", &MachineConfig::vlen_bits},
    {"dlen_bits", &MachineConfig::dlen_bits},
    {"num_vregs", &MachineConfig::num_vregs},
    {"load_first_chunk_offset", &MachineConfig::load_first_chunk_offset},
    {"alu_first_chunk_offset", &MachineConfig::alu_first_chunk_offset},
    {"mac_first_chunk_offset", &MachineConfig::mac_first_chunk_offset},
    {"scalar_load_latency", &MachineConfig::scalar_load_latency},
    {"load_chunks_per_cycle", &MachineConfig::load_chunks_per_cycle},
    {"wide_chunks_per_cycle", &MachineConfig::wide_chunks_per_cycle},
    {"issue_width", &MachineConfig::issue_width},
}};

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

MachineConfig ParseMachineConfig(std::string_view text) {
  MachineConfig config = MachineConfig::Paper();
  std::set<std::string_view> seen;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::kConfig,
                  fmt::format("config line {}: expected key = value", line_no));
    }
    const std::string_view key = Trim(line.substr(0, eq));
    const std::string_view value = Trim(line.substr(eq + 1));
    const Field* field = nullptr;
    for (const auto& f : kFields) {
      if (f.key == key) field = &f;
    }
    if (field == nullptr) {
      throw Error(ErrorKind::kConfig,
                  fmt::format("config line {}: unknown key '{}'", line_no, key));
    }
    if (!seen.insert(field->key).second) {
      throw Error(ErrorKind::kConfig,
                  fmt::format("config line {}: duplicate key '{}'", line_no, key));
    }
    int parsed = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
      throw Error(ErrorKind::kConfig,
                  fmt::format("config line {}: '{}' is not an integer", line_no, value));
    }
    config.*(field->member) = parsed;
  }
  config.Validate();
  return config;
}

MachineConfig LoadMachineConfig(const std::string& preset_or_path) {
  if (preset_or_path == "paper") return MachineConfig::Paper();
  std::ifstream file(preset_or_path);
  if (!file) {
    throw Error(ErrorKind::kUsage,
                fmt::format("'{}' is neither a preset nor a readable config file",
                            preset_or_path));
  }
  std::stringstream buffer;
  buffer << file.rdbuf();
  return ParseMachineConfig(buffer.str());
}

std::string RenderMachineConfig(const MachineConfig& config) {
  std::string out;
  for (const auto& f : kFields) {
    out += fmt::format("{} = {}\n", f.key, config.*(f.member));
  }
  return out;
}

}  // namespace rvvsim
