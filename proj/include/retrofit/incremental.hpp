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

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "retrofit/compdb.hpp"

namespace retrofit {

/// Modification time in nanoseconds since the epoch; nullopt if absent.
std::optional<int64_t> file_mtime(const std::string& path);

struct DependencyScan {
  std::string unit;  // absolute, normalized
  int64_t unit_mtime = 0;
  std::map<std::string, int64_t> deps;  // every transitive project include, flat
  std::vector<std::string> external;    // includes that did not resolve
};

/// Follows `#include` directives from the unit.
/// Quoted names resolve against the including file's directory, then the
/// include directories; angle names against the include directories only.
DependencyScan scan_dependencies(const CompileCommand& unit, const std::vector<std::string>& include_dirs);
DependencyScan scan_dependencies(const CompileCommand& unit);

using ScanSet = std::map<std::string, DependencyScan>;  // keyed by unit path

struct UnitRecord {
  int64_t id = 0;
  int64_t file_id = 0;
  int64_t timestamp = 0;
  std::string cmd_args;
};

struct FileRecord {
  int64_t id = 0;
  std::string path;
};

struct RelationRecord {
  int64_t file_id = 0;
  int64_t dep_id = 0;
  int64_t dependency_timestamp = 0;
};

inline constexpr int kSchemaVersion = 1;

/// The persistent project state: FILES, COMPILATION_UNIT and RELATIONS in one
/// SQLite file. Created on first open, never overwritten.
class StateStore {
 public:
  struct Options {
    bool read_only = false;
  };

  static std::string default_path(const std::string& workdir);  // <workdir>/.retrofit/state.db

  /// Throws Error(StoreSchemaTooNew) for a newer schema and
  /// Error(StoreWriteFailure) when the file cannot be created or opened.
  explicit StateStore(const std::string& path);
  StateStore(const std::string& path, Options options);
  ~StateStore();
  StateStore(StateStore&&) noexcept;
  StateStore& operator=(StateStore&&) noexcept;

  const std::string& path() const;
  bool created() const;  // true if this open created the file

  std::vector<FileRecord> files() const;
  std::vector<UnitRecord> units() const;
  std::vector<RelationRecord> relations() const;

  std::optional<UnitRecord> unit(std::string_view path) const;
  /// Stored dependencies of a unit: path -> dependency_timestamp.
  std::map<std::string, int64_t> dependencies(std::string_view unit_path) const;

  /// Records successful units: refreshes timestamps and cmd_args, inserts
  /// new units and files and reconciles relations with the scans. All or
  /// nothing; throws Error(StoreWriteFailure).
  void commit(const std::vector<CompileCommand>& units, const ScanSet& scans);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

enum class StaleReason {
  New,
  UnitModified,
  CommandChanged,
  DependencyModified,
  DependencyAdded,
  DependencyRemoved,
};

std::string_view to_string(StaleReason reason);

struct StaleUnit {
  const CompileCommand* unit = nullptr;  // into the database passed to select_stale
  std::string file;
  std::vector<StaleReason> reasons;
};

/// Units needing transformation, in database order.
std::vector<StaleUnit> select_stale(const StateStore& store, const CompilationDatabase& db, const ScanSet& scans);

/// Scans every unit of the database.
ScanSet scan_all(const CompilationDatabase& db);

}  // namespace retrofit
