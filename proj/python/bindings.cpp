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


#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "retrofit/error.hpp"
#include "retrofit/pipeline.hpp"
#include "retrofit/traceability.hpp"
#include "retrofit/transforms.hpp"

namespace py = pybind11;
using namespace retrofit;

namespace {

std::vector<std::string> feature_names(const FeatureSet& set) {
  std::vector<std::string> out;
  for (Feature f : set.list()) out.emplace_back(to_string(f));
  return out;
}

std::map<std::string, size_t> count_names(const std::map<Feature, size_t>& counts) {
  std::map<std::string, size_t> out;
  for (const auto& [f, n] : counts) out[std::string(to_string(f))] = n;
  return out;
}

py::dict log_entry(const PhaseLogEntry& e) {
  py::dict d;
  d["unit"] = e.unit;
  d["phase"] = e.phase;
  d["pass"] = e.pass;
  d["edits"] = e.edits;
  d["millis"] = e.millis;
  return d;
}

py::dict transform_source(const std::string& path, const std::string& text) {
  UnitOutcome o = run_phases(path, text);
  py::dict d;
  d["text"] = o.text;
  d["failed"] = o.failed;
  d["failure"] = o.failure;
  d["features"] = feature_names(o.features);
  d["edit_counts"] = count_names(o.edit_counts);
  py::list warnings;
  for (const auto& w : o.warnings) warnings.append(py::make_tuple(w.line, std::string(to_string(w.feature)), w.reason));
  d["warnings"] = warnings;
  py::list log;
  for (const auto& e : o.log) log.append(log_entry(e));
  d["log"] = log;
  d["trace"] = format_trace(build_linemap(path, path, count_lines(o.original), o.maps));
  return d;
}

RunConfig make_config(const std::string& root, const std::string& compdb, const std::string& workdir, int jobs,
                      bool full, bool fail_fast) {
  RunConfig c;
  c.project_root = root;
  c.compdb_path = compdb;
  c.workdir = workdir;
  c.jobs = jobs;
  c.force_full = full;
  c.fail_fast = fail_fast;
  return c;
}

py::dict run_project(const std::string& root, const std::string& compdb, const std::string& workdir, int jobs,
                     bool full, bool fail_fast) {
  RunSummary s;
  {
    py::gil_scoped_release release;
    s = run(make_config(root, compdb, workdir, jobs, full, fail_fast));
  }
  py::dict d;
  d["exit_code"] = s.exit_code;
  d["units"] = s.units_total;
  d["transformed"] = s.transformed;
  d["skipped"] = s.skipped;
  d["failed"] = s.failed;
  d["not_run"] = s.not_run;
  d["headers"] = s.headers;
  d["edit_counts"] = count_names(s.edit_counts);
  d["phase_millis"] = s.bucket_millis;
  d["wall_millis"] = s.wall_millis;
  py::list files;
  for (const auto& f : s.files) {
    py::dict fd;
    fd["file"] = f.file;
    fd["is_unit"] = f.is_unit;
    fd["ran"] = f.ran;
    fd["failed"] = f.failed;
    fd["failure"] = f.failure;
    fd["features"] = feature_names(f.features);
    files.append(fd);
  }
  d["files"] = files;
  py::list log;
  for (const auto& e : s.log) log.append(log_entry(e));
  d["log"] = log;
  d["report"] = format_report(s);
  return d;
}

std::vector<std::pair<std::string, std::vector<std::string>>> stale(const std::string& root,
                                                                    const std::string& compdb,
                                                                    const std::string& workdir, bool full) {
  CompilationDatabase db;
  std::vector<std::pair<std::string, std::vector<std::string>>> out;
  for (const StaleUnit& s : stale_units(make_config(root, compdb, workdir, 1, full, false), db)) {
    std::vector<std::string> reasons;
    for (StaleReason r : s.reasons) reasons.emplace_back(to_string(r));
    out.emplace_back(s.file, std::move(reasons));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_retrofit, m) {
  m.doc() = "C++11 to C++03 source transformation";
  py::register_exception<Error>(m, "RetrofitError");

  m.def("transform_source", &transform_source, py::arg("path"), py::arg("text"),
        "Run every phase on one source text; returns text, features, edit counts, warnings, log and trace.");
  m.def(
      "find_features",
      [](const std::string& text) { return feature_names(find_features(parse_source(SourceText("<text>", text)))); },
      py::arg("text"));
  m.def(
      "check_syntax",
      [](const std::string& text) {
        std::vector<std::string> codes;
        for (const auto& d : check_syntax(parse_source(SourceText("<text>", text)))) codes.push_back(d.code);
        return codes;
      },
      py::arg("text"));
  m.def("run", &run_project, py::arg("root"), py::arg("compdb"), py::arg("workdir"), py::arg("jobs") = 1,
        py::arg("full") = false, py::arg("fail_fast") = false);
  m.def("stale", &stale, py::arg("root"), py::arg("compdb"), py::arg("workdir"), py::arg("full") = false);
  m.def(
      "trace",
      [](const std::string& file, uint32_t line) {
        TraceResult r = lookup(read_trace(trace_path(file)), line);
        return py::make_tuple(r.path, r.line, r.exact);
      },
      py::arg("file"), py::arg("line"));
}
