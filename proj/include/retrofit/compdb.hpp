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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace retrofit {

/// Lexical path normalization: backslashes become '/', "." segments vanish,
/// ".." pops its parent, repeated separators collapse. Drive prefixes such as
/// "c:" are kept and count as absolute. No filesystem access.
std::string normalize_path(std::string_view path);

bool is_absolute_path(std::string_view path);

/// Joins `relative` onto `base` unless `relative` is already absolute, then
/// normalizes.
std::string resolve_path(std::string_view base, std::string_view relative);

/// Directory part of a normalized path ("/a/b.cpp" -> "/a").
std::string parent_path(std::string_view path);

/// True if `path` equals `root` or lies below it (byte comparison).
bool path_is_under(std::string_view path, std::string_view root);

struct CompileCommand {
  std::string directory;
  std::string command;
  std::string file;  // absolute and normalized after loading

  bool operator==(const CompileCommand&) const = default;
};

struct CompilationDatabase {
  std::vector<CompileCommand> entries;
  std::vector<std::string> warnings;

  const CompileCommand* find(std::string_view file) const;
};

/// Parses compilation database text. Throws Error on malformed input.
CompilationDatabase parse_database(std::string_view text);

/// Reads and parses the file at `path`.
CompilationDatabase load_database(const std::filesystem::path& path);

/// Include search path of a unit: the unit's directory first, then every
/// `-I<dir>` / `-I <dir>` in command order, resolved against `directory`.
std::vector<std::string> extract_include_dirs(const CompileCommand& cmd);

/// Splits a command line on whitespace, honouring single and double quotes.
std::vector<std::string> split_command_line(std::string_view command);

}  // namespace retrofit
