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

#ifndef RVVSIM_MACHINE_CONFIG_H_
#define RVVSIM_MACHINE_CONFIG_H_

#include <string>
#include <string_view>

#include "rvvsim/isa.h"

namespace rvvsim {

// Parses the flat config format:
//
//   # comment
//   vlen_bits = 64
//   mac_first_chunk_offset = 5
//
// Keys are MachineConfig field names; omitted keys keep the "paper" preset
// value. Unknown or repeated keys are errors.
MachineConfig ParseMachineConfig(std::string_view text);

// Accepts a preset name ("paper") or a path to a config file.
MachineConfig LoadMachineConfig(const std::string& preset_or_path);

std::string RenderMachineConfig(const MachineConfig& config);

}  // namespace rvvsim

#endif  // RVVSIM_MACHINE_CONFIG_H_
