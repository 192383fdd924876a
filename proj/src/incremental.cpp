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


#include <sqlite3.h>

#include <deque>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "retrofit/error.hpp"
#include "retrofit/incremental.hpp"
#include "retrofit/source.hpp"

namespace retrofit {

namespace fs = std::filesystem;

std::optional<int64_t> file_mtime(const std::string& path) {
  std::error_code ec;
  auto t = fs::last_write_time(path, ec);
  if (ec) return std::nullopt;
  return std::chrono::duration_cast<std::chrono::nanoseconds>(t.time_since_epoch()).count();
}

// ---- dependency scanning ----------------------------------------------------

namespace {

struct IncludeName {
  std::string name;
  bool quoted = false;
};

std::optional<IncludeName> include_of(std::string_view directive) {
  size_t i = 0;
  auto skip_space = [&] {
    while (i < directive.size() && (directive[i] == ' ' || directive[i] == '\t')) ++i;
  };
  skip_space();
  if (i >= directive.size() || directive[i] != '#') return std::nullopt;
  ++i;
  skip_space();
  constexpr std::string_view kw = "include";
  if (directive.substr(i, kw.size()) != kw) return std::nullopt;
  i += kw.size();
  if (i < directive.size() && (std::isalnum(static_cast<unsigned char>(directive[i])) || directive[i] == '_'))
    return std::nullopt;  // include_next and friends
  skip_space();
  if (i >= directive.size()) return std::nullopt;
  char open = directive[i];
  char close = open == '"' ? '"' : open == '<' ? '>' : 0;
  if (!close) return std::nullopt;
  size_t end = directive.find(close, i + 1);
  if (end == std::string_view::npos) return std::nullopt;
  return IncludeName{std::string(directive.substr(i + 1, end - i - 1)), open == '"'};
}

std::optional<std::string> read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_file(const std::string& path) {
  std::error_code ec;
  return fs::is_regular_file(path, ec);
}

std::vector<IncludeName> includes_in(std::string_view text) {
  std::vector<IncludeName> out;
  for (const Token& t : tokenize(text).tokens)
    if (t.kind == TokenKind::Preprocessor)
      if (auto inc = include_of(t.text)) out.push_back(*inc);
  return out;
}

}  // namespace

DependencyScan scan_dependencies(const CompileCommand& unit, const std::vector<std::string>& include_dirs) {
  DependencyScan scan;
  scan.unit = normalize_path(unit.file);
  auto text = read_text(scan.unit);
  if (!text) throw Error(ErrorKind::UnreadableFile, scan.unit);
  scan.unit_mtime = file_mtime(scan.unit).value_or(0);

  std::set<std::string> visited{scan.unit};
  std::set<std::string> external;
  std::deque<std::pair<std::string, std::vector<IncludeName>>> work;
  work.emplace_back(scan.unit, includes_in(*text));

  while (!work.empty()) {
    auto [from, names] = std::move(work.front());
    work.pop_front();
    for (const auto& inc : names) {
      std::optional<std::string> found;
      if (is_absolute_path(inc.name)) {
        if (is_file(inc.name)) found = normalize_path(inc.name);
      } else {
        std::vector<std::string> dirs;
        if (inc.quoted) dirs.push_back(parent_path(from));
        dirs.insert(dirs.end(), include_dirs.begin(), include_dirs.end());
        for (const auto& d : dirs) {
          std::string candidate = resolve_path(d, inc.name);
          if (is_file(candidate)) {
            found = candidate;
            break;
          }
        }
      }
      if (!found) {
        external.insert(inc.name);
        continue;
      }
      if (!visited.insert(*found).second) continue;
      scan.deps[*found] = file_mtime(*found).value_or(0);
      if (auto dep_text = read_text(*found)) work.emplace_back(*found, includes_in(*dep_text));
    }
  }
  scan.external.assign(external.begin(), external.end());
  return scan;
}

DependencyScan scan_dependencies(const CompileCommand& unit) {
  return scan_dependencies(unit, extract_include_dirs(unit));
}

ScanSet scan_all(const CompilationDatabase& db) {
  ScanSet out;
  for (const auto& e : db.entries) out.emplace(normalize_path(e.file), scan_dependencies(e));
  return out;
}

// ---- state store ------------------------------------------------------------

namespace {

class Statement {
 public:
  Statement(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK)
      throw Error(ErrorKind::StoreWriteFailure, sqlite3_errmsg(db));
  }
  ~Statement() { sqlite3_finalize(stmt_); }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;

  Statement& bind(int i, int64_t v) {
    sqlite3_bind_int64(stmt_, i, v);
    return *this;
  }
  Statement& bind(int i, std::string_view v) {
    sqlite3_bind_text(stmt_, i, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT);
    return *this;
  }

  bool step() {
    int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw Error(ErrorKind::StoreWriteFailure, sqlite3_errmsg(db_));
  }
  void run() {
    while (step()) {
    }
    sqlite3_reset(stmt_);
    sqlite3_clear_bindings(stmt_);
  }

  int64_t integer(int col) const { return sqlite3_column_int64(stmt_, col); }
  std::string text(int col) const {
    const auto* p = reinterpret_cast<const char*>(sqlite3_column_text(stmt_, col));
    return p ? std::string(p, static_cast<size_t>(sqlite3_column_bytes(stmt_, col))) : std::string();
  }

 private:
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS FILES(
  id INTEGER PRIMARY KEY,
  path TEXT NOT NULL UNIQUE);
CREATE TABLE IF NOT EXISTS COMPILATION_UNIT(
  id INTEGER PRIMARY KEY,
  file_id INTEGER NOT NULL UNIQUE REFERENCES FILES(id),
  timestamp INTEGER NOT NULL,
  cmd_args TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS RELATIONS(
  file_id INTEGER NOT NULL REFERENCES FILES(id),
  dep_id INTEGER NOT NULL REFERENCES FILES(id),
  dependency_timestamp INTEGER NOT NULL,
  PRIMARY KEY(file_id, dep_id));
)sql";

void exec(sqlite3* db, const char* sql) {
  char* err = nullptr;
  if (sqlite3_exec(db, sql, nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "unknown error";
    sqlite3_free(err);
    throw Error(ErrorKind::StoreWriteFailure, msg);
  }
}

}  // namespace

struct StateStore::Impl {
  std::string path;
  sqlite3* db = nullptr;
  bool created = false;

  ~Impl() {
    if (db) sqlite3_close(db);
  }

  int64_t file_id(std::string_view p) {
    Statement find(db, "SELECT id FROM FILES WHERE path = ?");
    find.bind(1, p);
    if (find.step()) return find.integer(0);
    Statement ins(db, "INSERT INTO FILES(path) VALUES(?)");
    ins.bind(1, p).run();
    return sqlite3_last_insert_rowid(db);
  }
};

std::string StateStore::default_path(const std::string& workdir) {
  return resolve_path(workdir, ".retrofit/state.db");
}

StateStore::StateStore(const std::string& path) : StateStore(path, Options{}) {}

StateStore::StateStore(const std::string& path, Options options) : impl_(std::make_unique<Impl>()) {
  impl_->path = path;
  std::error_code ec;
  bool exists = fs::exists(path, ec);
  if (!exists && options.read_only) {
    if (sqlite3_open_v2(":memory:", &impl_->db, SQLITE_OPEN_READWRITE, nullptr) != SQLITE_OK)
      throw Error(ErrorKind::StoreWriteFailure, "cannot open an in-memory store");
    exec(impl_->db, kSchema);
    exec(impl_->db, "PRAGMA query_only = 1");
    return;
  }
  if (!exists) {
    fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent, ec);
  }
  int flags = options.read_only ? SQLITE_OPEN_READONLY : SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE;
  if (sqlite3_open_v2(path.c_str(), &impl_->db, flags, nullptr) != SQLITE_OK)
    throw Error(ErrorKind::StoreWriteFailure, "cannot open " + path + ": " + sqlite3_errmsg(impl_->db));
  sqlite3_busy_timeout(impl_->db, 5000);
  Statement v(impl_->db, "PRAGMA user_version");
  v.step();
  int64_t version = v.integer(0);
  if (version > kSchemaVersion)
    throw Error(ErrorKind::StoreSchemaTooNew,
                path + " has schema " + std::to_string(version) + ", expected " + std::to_string(kSchemaVersion));
  if (version == 0 && !options.read_only) {
    exec(impl_->db, "BEGIN IMMEDIATE");
    exec(impl_->db, kSchema);
    exec(impl_->db, ("PRAGMA user_version = " + std::to_string(kSchemaVersion)).c_str());
    exec(impl_->db, "COMMIT");
    impl_->created = !exists;
  }
}

StateStore::~StateStore() = default;
StateStore::StateStore(StateStore&&) noexcept = default;
StateStore& StateStore::operator=(StateStore&&) noexcept = default;

const std::string& StateStore::path() const { return impl_->path; }
bool StateStore::created() const { return impl_->created; }

std::vector<FileRecord> StateStore::files() const {
  std::vector<FileRecord> out;
  Statement s(impl_->db, "SELECT id, path FROM FILES ORDER BY id");
  while (s.step()) out.push_back({s.integer(0), s.text(1)});
  return out;
}

std::vector<UnitRecord> StateStore::units() const {
  std::vector<UnitRecord> out;
  Statement s(impl_->db, "SELECT id, file_id, timestamp, cmd_args FROM COMPILATION_UNIT ORDER BY id");
  while (s.step()) out.push_back({s.integer(0), s.integer(1), s.integer(2), s.text(3)});
  return out;
}

std::vector<RelationRecord> StateStore::relations() const {
  std::vector<RelationRecord> out;
  Statement s(impl_->db, "SELECT file_id, dep_id, dependency_timestamp FROM RELATIONS ORDER BY file_id, dep_id");
  while (s.step()) out.push_back({s.integer(0), s.integer(1), s.integer(2)});
  return out;
}

std::optional<UnitRecord> StateStore::unit(std::string_view path) const {
  Statement s(impl_->db,
              "SELECT u.id, u.file_id, u.timestamp, u.cmd_args FROM COMPILATION_UNIT u "
              "JOIN FILES f ON f.id = u.file_id WHERE f.path = ?");
  s.bind(1, path);
  if (!s.step()) return std::nullopt;
  return UnitRecord{s.integer(0), s.integer(1), s.integer(2), s.text(3)};
}

std::map<std::string, int64_t> StateStore::dependencies(std::string_view unit_path) const {
  std::map<std::string, int64_t> out;
  Statement s(impl_->db,
              "SELECT d.path, r.dependency_timestamp FROM RELATIONS r "
              "JOIN FILES u ON u.id = r.file_id JOIN FILES d ON d.id = r.dep_id WHERE u.path = ?");
  s.bind(1, unit_path);
  while (s.step()) out[s.text(0)] = s.integer(1);
  return out;
}

void StateStore::commit(const std::vector<CompileCommand>& units, const ScanSet& scans) {
  sqlite3* db = impl_->db;
  if (sqlite3_db_readonly(db, "main") == 1)
    throw Error(ErrorKind::StoreWriteFailure, impl_->path + " is open read-only");
  try {
    exec(db, "BEGIN IMMEDIATE");
    for (const CompileCommand& cmd : units) {
      std::string path = normalize_path(cmd.file);
      auto it = scans.find(path);
      DependencyScan fallback;
      if (it == scans.end()) {
        fallback.unit = path;
        fallback.unit_mtime = file_mtime(path).value_or(0);
      }
      const DependencyScan& scan = it == scans.end() ? fallback : it->second;
      int64_t fid = impl_->file_id(path);
      Statement up(db,
                   "INSERT INTO COMPILATION_UNIT(file_id, timestamp, cmd_args) VALUES(?, ?, ?) "
                   "ON CONFLICT(file_id) DO UPDATE SET timestamp = excluded.timestamp, cmd_args = excluded.cmd_args");
      up.bind(1, fid).bind(2, scan.unit_mtime).bind(3, cmd.command).run();

      std::map<int64_t, int64_t> wanted;
      for (const auto& [dep, mtime] : scan.deps) wanted[impl_->file_id(dep)] = mtime;
      std::vector<int64_t> gone;
      {
        Statement old(db, "SELECT dep_id FROM RELATIONS WHERE file_id = ?");
        old.bind(1, fid);
        while (old.step())
          if (!wanted.contains(old.integer(0))) gone.push_back(old.integer(0));
      }
      Statement del(db, "DELETE FROM RELATIONS WHERE file_id = ? AND dep_id = ?");
      for (int64_t d : gone) del.bind(1, fid).bind(2, d).run();
      Statement rel(db,
                    "INSERT INTO RELATIONS(file_id, dep_id, dependency_timestamp) VALUES(?, ?, ?) "
                    "ON CONFLICT(file_id, dep_id) DO UPDATE SET dependency_timestamp = excluded.dependency_timestamp");
      for (const auto& [d, mtime] : wanted) rel.bind(1, fid).bind(2, d).bind(3, mtime).run();
    }
    exec(db, "COMMIT");
  } catch (const Error&) {
    sqlite3_exec(db, "ROLLBACK", nullptr, nullptr, nullptr);
    throw;
  }
}

// ---- staleness --------------------------------------------------------------

std::string_view to_string(StaleReason reason) {
  switch (reason) {
    case StaleReason::New: return "new";
    case StaleReason::UnitModified: return "unit-modified";
    case StaleReason::CommandChanged: return "command-changed";
    case StaleReason::DependencyModified: return "dependency-modified";
    case StaleReason::DependencyAdded: return "dependency-added";
    case StaleReason::DependencyRemoved: return "dependency-removed";
  }
  return "?";
}

std::vector<StaleUnit> select_stale(const StateStore& store, const CompilationDatabase& db, const ScanSet& scans) {
  std::vector<StaleUnit> out;
  for (const CompileCommand& cmd : db.entries) {
    std::string path = normalize_path(cmd.file);
    StaleUnit s{&cmd, path, {}};
    auto rec = store.unit(path);
    auto scan = scans.find(path);
    if (!rec) {
      s.reasons.push_back(StaleReason::New);
      out.push_back(std::move(s));
      continue;
    }
    int64_t mtime = scan != scans.end() ? scan->second.unit_mtime : file_mtime(path).value_or(0);
    if (mtime != rec->timestamp) s.reasons.push_back(StaleReason::UnitModified);
    if (cmd.command != rec->cmd_args) s.reasons.push_back(StaleReason::CommandChanged);
    std::map<std::string, int64_t> stored = store.dependencies(path);
    static const std::map<std::string, int64_t> kNone;
    const auto& current = scan != scans.end() ? scan->second.deps : kNone;
    bool modified = false, added = false, removed = false;
    for (const auto& [dep, t] : current) {
      auto it = stored.find(dep);
      if (it == stored.end()) added = true;
      else if (it->second != t) modified = true;
    }
    for (const auto& [dep, t] : stored)
      if (!current.contains(dep)) removed = true;
    if (modified) s.reasons.push_back(StaleReason::DependencyModified);
    if (added) s.reasons.push_back(StaleReason::DependencyAdded);
    if (removed) s.reasons.push_back(StaleReason::DependencyRemoved);
    if (!s.reasons.empty()) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace retrofit
