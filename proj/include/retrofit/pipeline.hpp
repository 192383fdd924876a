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


#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "retrofit/edit.hpp"
#include "retrofit/incremental.hpp"
#include "retrofit/transforms.hpp"

namespace retrofit {

struct RunConfig {
  std::string project_root;
  std::string compdb_path;
  std::string workdir;
  int jobs = 1;
  bool force_full = false;
  bool fail_fast = false;
  bool allow_workdir_inside_root = false;
};

/// Normalizes the paths and checks the invariants. Throws Error(InvalidConfig).
RunConfig validate(RunConfig config);

struct MirrorReport {
  size_t copied = 0;     // files written to the work directory
  size_t untouched = 0;  // files left as they were
};

/// Copies the project tree into the work directory. With `refresh` null
/// every file is copied; otherwise only the listed files and files missing
/// from the work directory are. The work directory itself is never copied.
MirrorReport mirror_tree(const std::string& project_root, const std::string& workdir,
                         const std::set<std::string>* refresh);

/// Work directory path a project file is written to.
std::string mirrored_path(const std::string& project_root, const std::string& workdir, const std::string& file);

struct FileReport {
  std::string file;  // absolute path in the project
  bool is_unit = true;
  bool ran = false;
  bool failed = false;
  std::string failure;
  FeatureSet features;
  std::map<Feature, size_t> edit_counts;
  std::vector<TransformWarning> warnings;
};

/// Summary buckets besides the five phases.
inline constexpr std::string_view kSetupBucket = "Setup";
inline constexpr std::string_view kHeadersBucket = "Headers";
inline constexpr std::string_view kIoBucket = "IO";  // reading inputs, writing outputs and traces
inline constexpr std::string_view kCommitBucket = "Commit";

struct RunSummary {
  size_t units_total = 0;
  size_t transformed = 0;  // units that went through the phases and succeeded
  size_t skipped = 0;      // up to date
  size_t failed = 0;
  size_t not_run = 0;  // left out by fail-fast
  size_t headers = 0;  // project headers transformed alongside
  std::vector<StaleUnit> stale;
  std::vector<FileReport> files;  // headers first, then units, each in a fixed order
  std::vector<PhaseLogEntry> log;
  std::map<std::string, double> bucket_millis;  // phases plus the buckets above
  std::map<Feature, size_t> edit_counts;
  MirrorReport mirror;
  double wall_millis = 0;
  int exit_code = 0;
};

/// load, scan, select, mirror, transform on `jobs` workers, write outputs
/// and trace sidecars, commit.
RunSummary run(const RunConfig& config);

/// The stale set a run would transform, without touching anything.
std::vector<StaleUnit> stale_units(const RunConfig& config, CompilationDatabase& db);

/// JSON lines: one per invoked pass, one per file, one per bucket and a
/// final summary line.
std::string format_report(const RunSummary& summary);

}  // namespace retrofit
