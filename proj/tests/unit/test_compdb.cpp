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


#include "../support/fixtures.hpp"
#include "doctest.h"
#include "retrofit/compdb.hpp"
#include "retrofit/error.hpp"

using namespace retrofit;

namespace {

ErrorKind error_of(std::string_view text) {
  try {
    parse_database(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error");
  return ErrorKind::InvalidConfig;
}

CompileCommand cmd(std::string command, std::string dir = "/p") { return {dir, command, dir + "/a.cpp"}; }

}  // namespace

TEST_CASE("database loading") {
  auto db = parse_database(
      R"([{"directory":"c:/work/projectDir","command":"cl.exe -c Source1.cpp -o2","file":"c:/work/projectDir/Source1.cpp"}])");
  REQUIRE(db.entries.size() == 1);
  CHECK(db.entries[0].file == "c:/work/projectDir/Source1.cpp");
  CHECK(db.entries[0].command == "cl.exe -c Source1.cpp -o2");
  CHECK(parse_database("[]").entries.empty());

  auto rel = parse_database(R"([{"directory":"/p","command":"cc -c a.cpp","file":"sub/../a.cpp"}])");
  CHECK(rel.entries[0].file == "/p/a.cpp");
  CHECK(rel.find("/p/a.cpp") == &rel.entries[0]);
  CHECK(rel.find("/p/b.cpp") == nullptr);

  auto extra = parse_database(R"([{"directory":"/p","command":"cc -c a.cpp","file":"a.cpp","output":"a.o"}])");
  CHECK(extra.warnings.size() == 1);

  CHECK(error_of(R"({"directory":"/p"})") == ErrorKind::NotAnArray);
  CHECK(error_of(R"([{"directory":"/p","file":"a.cpp"}])") == ErrorKind::MissingKey);
  CHECK(error_of(R"([{"directory":"/p","command":"cc -c a.cpp","file":"a.cpp"},
                     {"directory":"/p/x","command":"cc -c ../a.cpp","file":"../a.cpp"}])") ==
        ErrorKind::DuplicateUnit);
  CHECK_THROWS_AS(load_database("/nonexistent/compile_commands.json"), Error);
}

TEST_CASE("loading is a function of the bytes") {
  test::TempDir dir;
  std::string text = R"([{"directory":"/q/./r","command":"cc -c x.cpp","file":"x.cpp"}])";
  test::write_file(dir / "a.json", text);
  test::write_file(dir / "b.json", text);
  CHECK(load_database(dir / "a.json").entries == load_database(dir / "b.json").entries);
  CHECK(load_database(dir / "a.json").entries[0].file == "/q/r/x.cpp");
}

TEST_CASE("path normalization") {
  CHECK(normalize_path("/a/./b//c/../d") == "/a/b/d");
  CHECK(normalize_path("c:\\work\\dir\\..\\x.cpp") == "c:/work/x.cpp");
  CHECK(is_absolute_path("c:/x"));
  CHECK(is_absolute_path("/x"));
  CHECK_FALSE(is_absolute_path("x/y"));
  CHECK(resolve_path("/p", "/abs/f") == "/abs/f");
  CHECK(resolve_path("/p/q", "../f") == "/p/f");
  CHECK(parent_path("/a/b.cpp") == "/a");
  CHECK(path_is_under("/p/a.cpp", "/p"));
  CHECK(path_is_under("/p", "/p"));
  CHECK_FALSE(path_is_under("/pq/a.cpp", "/p"));
  for (std::string p : {"/a/b/../c", "c:\\x\\.\\y", "/./a//b/", "rel/../x"}) {
    std::string once = normalize_path(p);
    CHECK(normalize_path(once) == once);
  }
}

TEST_CASE("include directories") {
  CHECK(extract_include_dirs(cmd("cc -Iinc -c a.cpp")) == std::vector<std::string>{"/p", "/p/inc"});
  CHECK(extract_include_dirs(cmd("cc -c a.cpp")) == std::vector<std::string>{"/p"});
  CHECK(extract_include_dirs(cmd("cc -I /abs -Irel -c a.cpp")) == std::vector<std::string>{"/p", "/abs", "/p/rel"});
  CHECK(extract_include_dirs(cmd("cc -DX -isystem /s -O2 -c a.cpp")) == std::vector<std::string>{"/p"});
  CHECK(split_command_line(R"(cc -D'A B' "-Ix y" -c a.cpp)") ==
        std::vector<std::string>{"cc", "-DA B", "-Ix y", "-c", "a.cpp"});
}
