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

#ifndef RVVSIM_CLI_H_
#define RVVSIM_CLI_H_

#include <ostream>

#include "rvvsim/errors.h"

namespace rvvsim {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitFit = 3;
inline constexpr int kExitSimulation = 4;
inline constexpr int kExitMismatch = 5;

int ExitCodeFor(ErrorKind kind);

// Entry point of the rvvsim tool; returns the process exit code. Subcommands:
// sim, analyze, exec, remap, corpus-list.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rvvsim

#endif  // RVVSIM_CLI_H_
