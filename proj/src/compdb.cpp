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

#include "retrofit/compdb.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "retrofit/error.hpp"

namespace retrofit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingKey: return "MissingKey";
    case ErrorKind::DuplicateUnit: return "DuplicateUnit";
    case ErrorKind::NotAnArray: return "NotAnArray";
    case ErrorKind::UnreadableFile: return "UnreadableFile";
    case ErrorKind::UnitOutsideRoot: return "UnitOutsideRoot";
    case ErrorKind::OverlappingEdits: return "OverlappingEdits";
    case ErrorKind::StoreWriteFailure: return "StoreWriteFailure";
    case ErrorKind::StoreSchemaTooNew: return "StoreSchemaTooNew";
    case ErrorKind::CopyFailure: return "CopyFailure";
    case ErrorKind::LineOutOfRange: return "LineOutOfRange";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::MalformedTrace: return "MalformedTrace";
  }
  return "Unknown";
}

namespace {

bool has_drive_prefix(std::string_view p) {
  return p.size() >= 2 && std::isalpha(static_cast<unsigned char>(p[0])) && p[1] == ':';
}

}  // namespace

bool is_absolute_path(std::string_view path) {
  if (!path.empty() && (path[0] == '/' || path[0] == '\\')) return true;
  return has_drive_prefix(path);
}

std::string normalize_path(std::string_view path) {
  std::string s(path);
  for (char& c : s)
    if (c == '\\') c = '/';

  std::string prefix;
  std::string_view rest = s;
  if (has_drive_prefix(rest)) {
    prefix = std::string(rest.substr(0, 2));
    rest.remove_prefix(2);
  }
  bool absolute = !rest.empty() && rest[0] == '/';
  if (absolute) prefix += '/';

  std::vector<std::string_view> parts;
  size_t i = 0;
  while (i <= rest.size()) {
    size_t j = rest.find('/', i);
    if (j == std::string_view::npos) j = rest.size();
    std::string_view seg = rest.substr(i, j - i);
    if (seg.empty() || seg == ".") {
      // skip
    } else if (seg == "..") {
      if (!parts.empty() && parts.back() != "..")
        parts.pop_back();
      else if (!absolute)
        parts.push_back(seg);
    } else {
      parts.push_back(seg);
    }
    i = j + 1;
  }

  std::string out = prefix;
  for (size_t k = 0; k < parts.size(); ++k) {
    if (k) out += '/';
    out += parts[k];
  }
  if (out.empty()) return ".";
  return out;
}

std::string resolve_path(std::string_view base, std::string_view relative) {
  if (is_absolute_path(relative) || base.empty()) return normalize_path(relative);
  std::string joined(base);
  joined += '/';
  joined += relative;
  return normalize_path(joined);
}

std::string parent_path(std::string_view path) {
  std::string norm = normalize_path(path);
  size_t slash = norm.rfind('/');
  if (slash == std::string::npos) return ".";
  if (slash == 0) return "/";
  if (slash == 2 && has_drive_prefix(norm)) return norm.substr(0, 3);
  return norm.substr(0, slash);
}

bool path_is_under(std::string_view path, std::string_view root) {
  if (path.size() < root.size() || path.substr(0, root.size()) != root) return false;
  if (path.size() == root.size()) return true;
  return root.ends_with('/') || path[root.size()] == '/';
}

const CompileCommand* CompilationDatabase::find(std::string_view file) const {
  for (const auto& e : entries)
    if (e.file == file) return &e;
  return nullptr;
}

std::vector<std::string> split_command_line(std::string_view command) {
  std::vector<std::string> out;
  std::string cur;
  bool have = false;
  char quote = 0;
  for (size_t i = 0; i < command.size(); ++i) {
    char c = command[i];
    if (quote) {
      if (c == quote) {
        quote = 0;
      } else if (c == '\\' && quote == '"' && i + 1 < command.size()) {
        cur += command[++i];
      } else {
        cur += c;
      }
    } else if (c == '"' || c == '\'') {
      quote = c;
      have = true;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      if (have) out.push_back(std::move(cur));
      cur.clear();
      have = false;
    } else {
      cur += c;
      have = true;
    }
  }
  if (have) out.push_back(std::move(cur));
  return out;
}

CompilationDatabase parse_database(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::NotAnArray, std::string("malformed compilation database: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorKind::NotAnArray, "compilation database must be an array");

  CompilationDatabase db;
  std::set<std::string> seen;
  for (size_t index = 0; index < doc.size(); ++index) {
    const auto& obj = doc[index];
    if (!obj.is_object())
      throw Error(ErrorKind::NotAnArray, "entry " + std::to_string(index) + " is not an object");
    CompileCommand cmd;
    for (const char* key : {"directory", "command", "file"}) {
      auto it = obj.find(key);
      if (it == obj.end() || !it->is_string())
        throw Error(ErrorKind::MissingKey,
                    "entry " + std::to_string(index) + " lacks string key '" + key + "'");
    }
    for (const auto& [key, _] : obj.items()) {
      if (key != "directory" && key != "command" && key != "file")
        db.warnings.push_back("entry " + std::to_string(index) + ": ignoring key '" + key + "'");
    }
    std::string directory = obj["directory"].get<std::string>();
    if (directory.empty())
      throw Error(ErrorKind::MissingKey, "entry " + std::to_string(index) + " has empty 'directory'");
    cmd.directory = normalize_path(directory);
    cmd.command = obj["command"].get<std::string>();
    cmd.file = resolve_path(cmd.directory, obj["file"].get<std::string>());

    size_t slash = cmd.file.rfind('/');
    std::string base = slash == std::string::npos ? cmd.file : cmd.file.substr(slash + 1);
    if (cmd.command.find(base) == std::string::npos)
      db.warnings.push_back("entry " + std::to_string(index) + ": command does not mention '" + base + "'");

    if (!seen.insert(cmd.file).second) throw Error(ErrorKind::DuplicateUnit, cmd.file);
    db.entries.push_back(std::move(cmd));
  }
  return db;
}

CompilationDatabase load_database(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::UnreadableFile, path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::UnreadableFile, path.string());
  return parse_database(buf.str());
}

std::vector<std::string> extract_include_dirs(const CompileCommand& cmd) {
  std::vector<std::string> dirs;
  dirs.push_back(parent_path(cmd.file.empty() ? cmd.directory + "/x" : cmd.file));
  auto args = split_command_line(cmd.command);
  for (size_t i = 0; i < args.size(); ++i) {
    std::string_view a = args[i];
    std::string dir;
    if (a == "-I") {
      if (i + 1 >= args.size()) break;
      dir = args[++i];
    } else if (a.starts_with("-I")) {
      dir = std::string(a.substr(2));
    } else {
      continue;
    }
    dirs.push_back(resolve_path(cmd.directory, dir));
  }
  return dirs;
}

}  // namespace retrofit
