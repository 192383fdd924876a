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

#include <algorithm>
#include <filesystem>

#include "../support/fixtures.hpp"
#include "doctest.h"
#include "retrofit/error.hpp"
#include "retrofit/incremental.hpp"

using namespace retrofit;
using retrofit::test::bump_mtime;
using retrofit::test::TempDir;
using retrofit::test::write_file;

namespace {

CompileCommand unit_at(const TempDir& d, const std::string& file, std::string command = "c++ -c") {
  return {d.str(), std::move(command) + " " + file, d / file};
}

std::vector<std::string> keys(const std::map<std::string, int64_t>& m) {
  std::vector<std::string> out;
  for (const auto& [k, v] : m) out.push_back(k);
  return out;
}

std::vector<std::string> stale_files(const std::vector<StaleUnit>& s) {
  std::vector<std::string> out;
  for (const auto& u : s) out.push_back(u.unit->file);
  return out;
}

}  // namespace

TEST_CASE("dependency scan is transitive and flat") {
  TempDir d;
  write_file(d / "a.cpp", "#include \"b.h\"\n#include <vector>\nint main() {}\n");
  write_file(d / "b.h", "#pragma once\n#include \"sub/c.h\"\n");
  write_file(d / "sub/c.h", "// leaf\n");
  write_file(d / "plain.cpp", "int x;\n");
  DependencyScan s = scan_dependencies(unit_at(d, "a.cpp"));
  CHECK(keys(s.deps) == std::vector<std::string>{d / "b.h", d / "sub/c.h"});
  CHECK(s.external == std::vector<std::string>{"vector"});
  CHECK(s.unit_mtime == *file_mtime(d / "a.cpp"));
  CHECK(scan_dependencies(unit_at(d, "plain.cpp")).deps.empty());
}

TEST_CASE("include cycles terminate") {
  TempDir d;
  write_file(d / "u.cpp", "#include \"a.h\"\n");
  write_file(d / "a.h", "#include \"b.h\"\n");
  write_file(d / "b.h", "#include \"a.h\"\n#include \"u.cpp\"\n");
  DependencyScan s = scan_dependencies(unit_at(d, "u.cpp"));
  CHECK(keys(s.deps) == std::vector<std::string>{d / "a.h", d / "b.h"});
}

TEST_CASE("include directories") {
  TempDir d;
  write_file(d / "src/u.cpp", "#include \"api.h\"\n#include <lib.h>\n#  include   \"missing.h\"\n"
                              "#if 0\n#include \"dead.h\"\n#endif\n// #include \"comment.h\"\n");
  write_file(d / "inc/api.h", "\n");
  write_file(d / "inc/lib.h", "\n");
  write_file(d / "src/dead.h", "\n");
  write_file(d / "src/comment.h", "\n");
  CompileCommand cmd{d / "src", "c++ -I../inc -c u.cpp", d / "src/u.cpp"};
  DependencyScan s = scan_dependencies(cmd);
  // Conditional sections are not evaluated, so dead.h is a dependency.
  CHECK(keys(s.deps) == std::vector<std::string>{d / "inc/api.h", d / "inc/lib.h", d / "src/dead.h"});
  CHECK(s.external == std::vector<std::string>{"missing.h"});
  CHECK_THROWS_AS(scan_dependencies(unit_at(d, "nope.cpp")), Error);
}

TEST_CASE("store schema and lifecycle") {
  TempDir d;
  std::string db = StateStore::default_path(d.str());
  CHECK(db == d / ".retrofit/state.db");
  {
    StateStore s(db);
    CHECK(s.created());
    CHECK(s.units().empty());
  }
  {
    StateStore again(db);
    CHECK_FALSE(again.created());
  }
  {
    StateStore s(db);
    write_file(d / "a.cpp", "int a;\n");
    CompilationDatabase cdb{{unit_at(d, "a.cpp")}, {}};
    s.commit(cdb.entries, scan_all(cdb));
  }
  CHECK(StateStore(db).units().size() == 1);  // reopening keeps the content

  TempDir e;
  std::string newer = StateStore::default_path(e.str());
  {
    StateStore s(newer);
  }
  {
    StateStore s(newer);
    s.commit({}, {});
  }
  // Simulate a store written by a later version.
  sqlite3* raw = nullptr;
  REQUIRE(sqlite3_open(newer.c_str(), &raw) == SQLITE_OK);
  sqlite3_exec(raw, "PRAGMA user_version = 7", nullptr, nullptr, nullptr);
  sqlite3_close(raw);
  try {
    StateStore s(newer);
    FAIL("opened a newer schema");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::StoreSchemaTooNew);
  }
}

TEST_CASE("first run registers every unit and file") {
  TempDir d;
  write_file(d / "a.cpp", "#include \"s.h\"\n");
  write_file(d / "b.cpp", "#include \"s.h\"\n#include \"t.h\"\n");
  write_file(d / "s.h", "\n");
  write_file(d / "t.h", "\n");
  CompilationDatabase cdb{{unit_at(d, "a.cpp"), unit_at(d, "b.cpp")}, {}};
  StateStore store(StateStore::default_path(d.str()));
  ScanSet scans = scan_all(cdb);
  auto first = select_stale(store, cdb, scans);
  REQUIRE(first.size() == 2);
  CHECK(first[0].reasons == std::vector<StaleReason>{StaleReason::New});
  store.commit(cdb.entries, scans);
  CHECK(store.units().size() == 2);
  CHECK(store.files().size() == 4);
  CHECK(store.relations().size() == 3);
  CHECK(select_stale(store, cdb, scan_all(cdb)).empty());
}

TEST_CASE("each trigger selects the affected units") {
  TempDir d;
  write_file(d / "u1.cpp", "#include \"shared.h\"\n");
  write_file(d / "u2.cpp", "#include \"shared.h\"\n#include \"own.h\"\n");
  write_file(d / "u3.cpp", "int z;\n");
  write_file(d / "shared.h", "\n");
  write_file(d / "own.h", "\n");
  write_file(d / "extra.h", "\n");
  CompilationDatabase cdb{{unit_at(d, "u1.cpp"), unit_at(d, "u2.cpp"), unit_at(d, "u3.cpp")}, {}};
  StateStore store(StateStore::default_path(d.str()));
  store.commit(cdb.entries, scan_all(cdb));

  SUBCASE("shared header touched") {
    bump_mtime(d / "shared.h");
    auto s = select_stale(store, cdb, scan_all(cdb));
    CHECK(stale_files(s) == std::vector<std::string>{d / "u1.cpp", d / "u2.cpp"});
    CHECK(s[0].reasons == std::vector<StaleReason>{StaleReason::DependencyModified});
  }
  SUBCASE("command edited") {
    cdb.entries[0].command += " -DX";
    auto s = select_stale(store, cdb, scan_all(cdb));
    CHECK(stale_files(s) == std::vector<std::string>{d / "u1.cpp"});
    CHECK(s[0].reasons == std::vector<StaleReason>{StaleReason::CommandChanged});
  }
  SUBCASE("unit touched") {
    bump_mtime(d / "u3.cpp");
    auto s = select_stale(store, cdb, scan_all(cdb));
    CHECK(stale_files(s) == std::vector<std::string>{d / "u3.cpp"});
  }
  SUBCASE("dependency removed, file record kept") {
    auto kept = std::filesystem::last_write_time(d / "u2.cpp");
    write_file(d / "u2.cpp", "#include \"shared.h\"\n");
    std::filesystem::last_write_time(d / "u2.cpp", kept);
    ScanSet scans = scan_all(cdb);
    auto s = select_stale(store, cdb, scans);
    CHECK(stale_files(s) == std::vector<std::string>{d / "u2.cpp"});
    CHECK(s[0].reasons == std::vector<StaleReason>{StaleReason::DependencyRemoved});
    size_t files = store.files().size();
    store.commit({cdb.entries[1]}, scans);
    CHECK(keys(store.dependencies(d / "u2.cpp")) == std::vector<std::string>{d / "shared.h"});
    CHECK(store.files().size() == files);
    CHECK(select_stale(store, cdb, scan_all(cdb)).empty());
  }
  SUBCASE("failed unit stays stale") {
    bump_mtime(d / "u1.cpp");
    bump_mtime(d / "u3.cpp");
    ScanSet scans = scan_all(cdb);
    CHECK(select_stale(store, cdb, scans).size() == 2);
    store.commit({cdb.entries[2]}, scans);  // u1 failed
    CHECK(stale_files(select_stale(store, cdb, scan_all(cdb))) == std::vector<std::string>{d / "u1.cpp"});
  }
}

TEST_CASE("read-only store refuses to commit and stays intact") {
  TempDir d;
  write_file(d / "a.cpp", "int a;\n");
  CompilationDatabase cdb{{unit_at(d, "a.cpp")}, {}};
  std::string path = StateStore::default_path(d.str());
  {
    StateStore s(path);
    s.commit(cdb.entries, scan_all(cdb));
  }
  auto before = test::read_file(path);
  StateStore ro(path, {.read_only = true});
  bump_mtime(d / "a.cpp");
  try {
    ro.commit(cdb.entries, scan_all(cdb));
    FAIL("commit succeeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StoreWriteFailure);
  }
  CHECK(test::read_file(path) == before);
  CHECK(select_stale(ro, cdb, scan_all(cdb)).size() == 1);

  TempDir empty;
  StateStore missing(StateStore::default_path(empty.str()), {.read_only = true});
  CHECK(select_stale(missing, cdb, scan_all(cdb)).size() == 1);
  CHECK_FALSE(std::filesystem::exists(StateStore::default_path(empty.str())));
}
