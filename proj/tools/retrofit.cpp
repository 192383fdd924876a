// Copyright 2026 The Retrofit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <fmt/core.h>

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "retrofit/error.hpp"
#include "retrofit/pipeline.hpp"
#include "retrofit/traceability.hpp"

namespace {

constexpr int kUsageOrIo = 2;

void add_project_options(CLI::App* cmd, retrofit::RunConfig& config) {
  cmd->add_option("-p,--compdb", config.compdb_path, "compile_commands.json of the project")->required();
  cmd->add_option("-r,--root", config.project_root, "project root directory")->required();
  cmd->add_option("-w,--workdir", config.workdir, "work directory receiving the transformed tree")->required();
  cmd->add_flag("--allow-workdir-inside-root", config.allow_workdir_inside_root,
                "accept a work directory below the project root");
}

int do_run(const retrofit::RunConfig& config, const std::string& report_path, bool quiet) {
  retrofit::RunSummary s = retrofit::run(config);
  for (const auto& f : s.files) {
    if (!quiet)
      for (const auto& w : f.warnings)
        fmt::print(stderr, "{}:{}: warning: {}: {}\n", f.file, w.line, retrofit::to_string(w.feature), w.reason);
    if (f.ran && f.failed) fmt::print(stderr, "{}: failed: {}\n", f.file, f.failure);
  }
  fmt::print(stderr, "{} units: {} transformed, {} up to date, {} failed, {} not run; {} headers; {:.1f} ms\n",
             s.units_total, s.transformed, s.skipped, s.failed, s.not_run, s.headers, s.wall_millis);
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary | std::ios::trunc);
    out << retrofit::format_report(s);
    if (!out) throw retrofit::Error(retrofit::ErrorKind::CopyFailure, "cannot write " + report_path);
  }
  return s.exit_code;
}

int do_status(const retrofit::RunConfig& config) {
  retrofit::CompilationDatabase db;
  auto stale = retrofit::stale_units(config, db);
  for (const auto& s : stale) {
    std::string reasons;
    for (auto r : s.reasons) reasons += (reasons.empty() ? "" : ",") + std::string(retrofit::to_string(r));
    fmt::print("{}\t{}\n", s.file, reasons.empty() ? "forced" : reasons);
  }
  fmt::print(stderr, "{} of {} units stale\n", stale.size(), db.entries.size());
  return 0;
}

int do_trace(const std::string& file, uint32_t line) {
  retrofit::LineMap map = retrofit::read_trace(retrofit::trace_path(file));
  retrofit::TraceResult r = retrofit::lookup(map, line);
  fmt::print("{}{}:{}\n", r.exact ? "" : "~", r.path, r.line);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"retrofit: rewrite C++11 sources as C++03"};
  app.require_subcommand(1);

  retrofit::RunConfig config;
  std::string report;
  bool quiet = false;
  auto* run_cmd = app.add_subcommand("run", "transform the stale units of a project");
  add_project_options(run_cmd, config);
  run_cmd->add_option("-j,--jobs", config.jobs, "worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_flag("--full", config.force_full, "transform every unit");
  run_cmd->add_flag("--fail-fast", config.fail_fast, "stop scheduling after the first failure");
  run_cmd->add_option("--report", report, "write a JSON-lines report here");
  run_cmd->add_flag("-q,--quiet", quiet, "do not print transformation warnings");

  auto* status_cmd = app.add_subcommand("status", "list the units the next run would transform");
  add_project_options(status_cmd, config);
  status_cmd->add_flag("--full", config.force_full, "as if --full were given to run");

  std::string trace_file;
  uint32_t trace_line = 0;
  auto* trace_cmd = app.add_subcommand("trace", "map a transformed line back to the original");
  trace_cmd->add_option("file", trace_file, "transformed file")->required();
  trace_cmd->add_option("line", trace_line, "line in the transformed file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageOrIo;
  }

  try {
    if (*run_cmd) return do_run(config, report, quiet);
    if (*status_cmd) return do_status(config);
    if (*trace_cmd) return do_trace(trace_file, trace_line);
  } catch (const retrofit::Error& e) {
    fmt::print(stderr, "retrofit: {}\n", e.what());
    return kUsageOrIo;
  } catch (const std::exception& e) {
    fmt::print(stderr, "retrofit: {}\n", e.what());
    return kUsageOrIo;
  }
  return kUsageOrIo;
}
