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

#include "rvvsim/cli.h"

#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "rvvsim/analysis.h"
#include "rvvsim/asm_parser.h"
#include "rvvsim/corpus.h"
#include "rvvsim/golden_exec.h"
#include "rvvsim/kernel_harness.h"
#include "rvvsim/machine_config.h"
#include "rvvsim/timing_sim.h"
#include "rvvsim/trace_render.h"

namespace rvvsim {
namespace {

constexpr std::string_view kCorpusPrefix = "corpus:";

struct GlobalOptions {
  std::string config = "paper";
  std::string format = "table";
  int vregs = 0;  // 0: keep the config's num_vregs
  int iterations = 12;
};

struct SimOptions {
  std::string kernel;
  bool full = false;
};

struct AnalyzeOptions {
  std::string kernel;
  bool all = false;
};

struct ExecOptions {
  std::string kernel;
  bool check = false;
  std::uint64_t seed = 1;
  int trials = 1;
  int trip_count = 0;
  std::string input = "random";
  std::string reference;
  std::string mem;
  std::string base;
  std::vector<std::string> sets;
  std::vector<std::string> binds;
  std::int64_t max_steps = 1000000;
};

struct RemapOptions {
  std::string kernel;
};

struct LoadedKernel {
  Program program;
  const CorpusEntry* entry = nullptr;  // set for corpus:<name>
};

std::string ReadFile(const std::string& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream file(path, mode);
  if (!file) throw Error(ErrorKind::kUsage, fmt::format("cannot read '{}'", path));
  return std::string(std::istreambuf_iterator<char>(file), {});
}

LoadedKernel LoadKernel(const std::string& spec) {
  LoadedKernel kernel;
  if (spec.starts_with(kCorpusPrefix)) {
    kernel.entry = &CorpusLookup(spec.substr(kCorpusPrefix.size()));
    kernel.program = kernel.entry->Parse();
  } else {
    kernel.program = ParseProgram(ReadFile(spec));
  }
  return kernel;
}

MachineConfig ResolveConfig(const GlobalOptions& g) {
  MachineConfig config = LoadMachineConfig(g.config);
  if (g.vregs != 0) config.num_vregs = g.vregs;
  config.Validate();
  return config;
}

OutputFormat ResolveFormat(const GlobalOptions& g) {
  return *ParseOutputFormat(g.format);
}

std::int64_t ParseInteger(const std::string& text, const std::string& what) {
  try {
    size_t used = 0;
    const std::int64_t value = std::stoll(text, &used, 0);
    if (used == text.size()) return value;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::kUsage, fmt::format("{}: '{}' is not an integer", what, text));
}

std::pair<std::string, std::string> SplitAssignment(const std::string& text,
                                                    const std::string& flag) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorKind::kUsage, fmt::format("{} expects NAME=VALUE, got '{}'", flag, text));
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

int RunSim(const GlobalOptions& g, const SimOptions& o, std::ostream& out) {
  const MachineConfig config = ResolveConfig(g);
  const LoadedKernel kernel = LoadKernel(o.kernel);
  const Trace trace = Simulate(kernel.program, config, g.iterations);
  out << RenderTrace(trace, ResolveFormat(g), o.full ? TraceWindow::kFull : TraceWindow::kSteady);
  return kExitOk;
}

int RunAnalyze(const GlobalOptions& g, const AnalyzeOptions& o, std::ostream& out) {
  const MachineConfig config = ResolveConfig(g);
  const OutputFormat format = ResolveFormat(g);
  if (o.all) {
    if (!o.kernel.empty()) throw Error(ErrorKind::kUsage, "--all takes no kernel argument");
    const auto rows = Summarize(config, g.iterations);
    switch (format) {
      case OutputFormat::kTable: out << RenderSummaryTable(rows); break;
      case OutputFormat::kCsv: out << RenderSummaryCsv(rows); break;
      case OutputFormat::kJson: out << SummaryToJson(rows).dump(2) << "\n"; break;
    }
    return kExitOk;
  }
  if (o.kernel.empty()) throw Error(ErrorKind::kUsage, "analyze needs a kernel or --all");
  const LoadedKernel kernel = LoadKernel(o.kernel);
  const UtilizationReport report = Analyze(kernel.program, config, g.iterations);
  switch (format) {
    case OutputFormat::kTable: out << RenderReportTable(report); break;
    case OutputFormat::kCsv:
      out << "unit,busy_cycles,steady_period,utilization,percent\n";
      for (const auto& u : report.units) {
        out << fmt::format("{},{},{},{},{}\n", UnitName(u.unit), u.busy_cycles,
                           report.steady_period, RenderRational(u.utilization),
                           RenderPercent(u.utilization));
      }
      break;
    case OutputFormat::kJson: out << ReportToJson(report).dump(2) << "\n"; break;
  }
  return kExitOk;
}

int RunExecCheck(const GlobalOptions& g, const ExecOptions& o, const MachineConfig& config,
                 const LoadedKernel& kernel, std::ostream& out) {
  ReferenceKind kind;
  if (!o.reference.empty()) {
    const std::pair<std::string, ReferenceKind> kinds[] = {
        {"gemm_tile", ReferenceKind::kGemmTile}, {"gemv", ReferenceKind::kGemv},
        {"accumulate", ReferenceKind::kAccumulate}, {"dot", ReferenceKind::kDot}};
    bool found = false;
    for (const auto& [name, k] : kinds) {
      if (name == o.reference) kind = k, found = true;
    }
    if (!found) throw Error(ErrorKind::kUsage, fmt::format("unknown reference '{}'", o.reference));
  } else if (kernel.entry) {
    kind = kernel.entry->reference;
  } else {
    throw Error(ErrorKind::kUsage, "--check on a kernel file needs --reference");
  }
  const auto mode = ParseInputMode(o.input);
  if (!mode) throw Error(ErrorKind::kUsage, fmt::format("unknown input mode '{}'", o.input));

  const std::string name = kernel.program.name;
  std::string failure;
  int failed_trial = -1;
  for (int t = 0; t < o.trials && failed_trial < 0; ++t) {
    const OracleCase oracle =
        BuildOracleCase(kernel.program, kind, config, o.seed + t, *mode, o.trip_count);
    const OracleResult result = CheckOracle(kernel.program, oracle, config);
    if (!result.pass) {
      failed_trial = t;
      failure = result.detail;
    }
  }
  const bool pass = failed_trial < 0;
  if (ResolveFormat(g) == OutputFormat::kJson) {
    nlohmann::json report = {{"kernel", name},       {"reference", ReferenceName(kind)},
                             {"input", o.input},     {"seed", o.seed},
                             {"trials", o.trials},   {"pass", pass}};
    if (!pass) report["failure"] = {{"trial", failed_trial}, {"detail", failure}};
    out << report.dump(2) << "\n";
  } else if (pass) {
    out << fmt::format("PASS {}: {} trial(s) match the {} reference (seed {}, input {})\n", name,
                       o.trials, ReferenceName(kind), o.seed, o.input);
  } else {
    out << fmt::format("FAIL {}: trial {} (seed {}): {}\n", name, failed_trial,
                       o.seed + failed_trial, failure);
  }
  return pass ? kExitOk : kExitMismatch;
}

int RunExec(const GlobalOptions& g, const ExecOptions& o, std::ostream& out) {
  const MachineConfig config = ResolveConfig(g);
  const LoadedKernel kernel = LoadKernel(o.kernel);
  if (o.check) return RunExecCheck(g, o, config, kernel, out);

  ArchState state = ArchState::Create(config);
  if (!o.mem.empty()) {
    if (o.mem.ends_with(".json")) {
      LoadMemoryImageJson(state, ReadFile(o.mem));
    } else {
      if (o.base.empty()) throw Error(ErrorKind::kUsage, "a binary memory image needs --base");
      const std::string bytes = ReadFile(o.mem, std::ios::binary);
      LoadMemoryImageBinary(
          state, std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()),
          static_cast<std::uint32_t>(ParseInteger(o.base, "--base")));
    }
  }
  for (const auto& set : o.sets) {
    const auto [reg, value] = SplitAssignment(set, "--set");
    const auto index = ParseScalarRegName(reg);
    if (!index) throw Error(ErrorKind::kUsage, fmt::format("--set: unknown register '{}'", reg));
    state.WriteX(*index, static_cast<std::uint32_t>(ParseInteger(value, "--set")));
  }
  Bindings bindings;
  for (const auto& bind : o.binds) {
    const auto [name, value] = SplitAssignment(bind, "--bind");
    bindings[name] = ParseInteger(value, "--bind");
  }
  const ArchState final_state = Run(kernel.program, config, state, o.max_steps, bindings);
  if (ResolveFormat(g) == OutputFormat::kJson) {
    out << StateToJson(final_state).dump(2) << "\n";
  } else {
    out << RenderState(final_state);
  }
  return kExitOk;
}

int RunRemap(const GlobalOptions& g, const RemapOptions& o, std::ostream& out) {
  const MachineConfig config = ResolveConfig(g);
  const LoadedKernel kernel = LoadKernel(o.kernel);
  const RemapResult result = Remap(kernel.program, config.num_vregs);
  if (ResolveFormat(g) == OutputFormat::kJson) {
    nlohmann::json map = nlohmann::json::object();
    for (const auto& [from, to] : result.register_map) map[fmt::format("v{}", from)] = to;
    out << nlohmann::json{{"kernel", kernel.program.name},
                          {"num_vregs", config.num_vregs},
                          {"changed", result.changed},
                          {"register_map", map},
                          {"vregs_used", VregPressure(result.program)},
                          {"text", RenderProgram(result.program)}}
                  .dump(2)
        << "\n";
    return kExitOk;
  }
  std::string moves;
  for (const auto& [from, to] : result.register_map) {
    if (from != to) moves += fmt::format(" v{}->v{}", from, to);
  }
  out << fmt::format("# remapped for {} vector registers:{}\n", config.num_vregs,
                     moves.empty() ? " unchanged" : moves);
  out << RenderProgram(result.program);
  return kExitOk;
}

std::string UtilizationText(const ExpectedMetrics& expected) {
  std::string text;
  for (const auto& [unit, value] : expected.utilization) {
    text += fmt::format("{}{}={}", text.empty() ? "" : " ", UnitName(unit), RenderRational(value));
  }
  return text;
}

int RunCorpusList(const GlobalOptions& g, std::ostream& out) {
  const OutputFormat format = ResolveFormat(g);
  if (format == OutputFormat::kJson) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& e : Corpus()) {
      nlohmann::json util = nlohmann::json::object();
      for (const auto& [unit, value] : e.expected.utilization) {
        util[std::string(UnitId(unit))] = RenderRational(value);
      }
      list.push_back({{"name", e.name},
                      {"description", e.description},
                      {"sew", e.vtype.sew_bits},
                      {"lmul", e.vtype.lmul},
                      {"reference", ReferenceName(e.reference)},
                      {"critical_unit", UnitId(e.critical_unit)},
                      {"expected",
                       {{"steady_period", e.expected.steady_period},
                        {"utilization", util},
                        {"vregs", e.expected.vregs}}},
                      {"note", e.note}});
    }
    out << list.dump(2) << "\n";
    return kExitOk;
  }
  if (format == OutputFormat::kCsv) {
    out << "name,sew,lmul,period,utilization,vregs,description\n";
    for (const auto& e : Corpus()) {
      out << fmt::format("{},{},{},{},\"{}\",{},\"{}\"\n", e.name, e.vtype.sew_bits, e.vtype.lmul,
                         e.expected.steady_period, UtilizationText(e.expected), e.expected.vregs,
                         e.description);
    }
    return kExitOk;
  }
  out << fmt::format("{:<11}{:<5}{:<6}{:<8}{:<26}{:<7}{}\n", "name", "sew", "lmul", "period",
                     "utilization", "vregs", "description");
  for (const auto& e : Corpus()) {
    out << fmt::format("{:<11}{:<5}{:<6}{:<8}{:<26}{:<7}{}\n", e.name, e.vtype.sew_bits,
                       e.vtype.lmul, e.expected.steady_period, UtilizationText(e.expected),
                       e.expected.vregs, e.description);
  }
  return kExitOk;
}

}  // namespace

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
    case ErrorKind::kUnknownKernel: return kExitUsage;
    case ErrorKind::kConfig:
    case ErrorKind::kParse:
    case ErrorKind::kInvalidGrouping: return kExitParse;
    case ErrorKind::kFit:
    case ErrorKind::kInfeasible: return kExitFit;
    case ErrorKind::kDeadlock:
    case ErrorKind::kNotConverged:
    case ErrorKind::kExec: return kExitSimulation;
    case ErrorKind::kOracleMismatch: return kExitMismatch;
  }
  return kExitUsage;
}

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Timing simulator, analyzer and golden executor for small RVV kernels", "rvvsim"};
  app.fallthrough();
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--config", g.config, "Machine config: 'paper' or a key = value file")
      ->capture_default_str();
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  app.add_option("--vregs", g.vregs, "Number of architectural vector registers")
      ->check(CLI::IsMember({8, 16, 32}));
  app.add_option("--iterations", g.iterations, "Loop iterations to simulate")
      ->check(CLI::Range(3, 100000))
      ->capture_default_str();

  SimOptions sim;
  auto* sim_cmd = app.add_subcommand("sim", "Simulate a kernel and print its trace");
  sim_cmd->add_option("kernel", sim.kernel, "Kernel file or corpus:<name>")->required();
  sim_cmd->add_flag("--full", sim.full, "Print every simulated cycle, not one period");

  AnalyzeOptions analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Utilization, pressure and fit report");
  analyze_cmd->add_option("kernel", analyze.kernel, "Kernel file or corpus:<name>");
  analyze_cmd->add_flag("--all", analyze.all, "Summarize the whole corpus");

  ExecOptions exec;
  auto* exec_cmd = app.add_subcommand("exec", "Run a kernel on the architectural model");
  exec_cmd->add_option("kernel", exec.kernel, "Kernel file or corpus:<name>")->required();
  exec_cmd->add_flag("--check", exec.check, "Compare against the naive scalar reference");
  exec_cmd->add_option("--seed", exec.seed, "Seed of the first --check trial")
      ->capture_default_str();
  exec_cmd->add_option("--trials", exec.trials, "Number of --check trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  exec_cmd->add_option("--trip-count", exec.trip_count, "Loop trips per trial (0: from seed)")
      ->check(CLI::NonNegativeNumber);
  exec_cmd->add_option("--input", exec.input, "Generated data: random, zero or extreme")
      ->check(CLI::IsMember({"random", "zero", "extreme"}))
      ->capture_default_str();
  exec_cmd->add_option("--reference", exec.reference,
                       "Reference for a kernel file: gemm_tile, gemv, accumulate, dot");
  exec_cmd->add_option("--mem", exec.mem, "Memory image: .json runs or flat binary");
  exec_cmd->add_option("--base", exec.base, "Load address of a binary memory image");
  exec_cmd->add_option("--set", exec.sets, "Initial scalar register, e.g. x5=0x1000");
  exec_cmd->add_option("--bind", exec.binds, "Value of a symbolic immediate, e.g. N=16");
  exec_cmd->add_option("--max-steps", exec.max_steps, "Step budget before a runaway error")
      ->capture_default_str();

  RemapOptions remap;
  auto* remap_cmd = app.add_subcommand("remap", "Renumber vector registers to fit --vregs");
  remap_cmd->add_option("kernel", remap.kernel, "Kernel file or corpus:<name>")->required();

  auto* list_cmd = app.add_subcommand("corpus-list", "List the bundled kernels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sim_cmd) return RunSim(g, sim, out);
    if (*analyze_cmd) return RunAnalyze(g, analyze, out);
    if (*exec_cmd) return RunExec(g, exec, out);
    if (*remap_cmd) return RunRemap(g, remap, out);
    if (*list_cmd) return RunCorpusList(g, out);
  } catch (const Error& e) {
    err << fmt::format("rvvsim: {} error: {}\n", ErrorKindName(e.kind()), e.what());
    return ExitCodeFor(e.kind());
  }
  return kExitUsage;
}

}  // namespace rvvsim
