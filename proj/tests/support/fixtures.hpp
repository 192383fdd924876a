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

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace retrofit::test {

namespace fs = std::filesystem;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "retrofit") {
    std::random_device rd;
    for (int i = 0; i < 100; ++i) {
      fs::path p = fs::temp_directory_path() / (tag + "-" + std::to_string(rd()));
      if (fs::create_directory(p)) {
        path_ = fs::weakly_canonical(p);
        return;
      }
    }
    throw std::runtime_error("cannot create a temporary directory");
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  std::string str() const { return path_.string(); }
  std::string operator/(const std::string& rel) const { return (path_ / rel).string(); }

 private:
  fs::path path_;
};

inline void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Moves a file's mtime by `seconds` so changes never fall within the
/// filesystem's timestamp resolution.
inline void bump_mtime(const fs::path& p, int seconds = 10) {
  fs::last_write_time(p, fs::last_write_time(p) + std::chrono::seconds(seconds));
}

}  // namespace retrofit::test

namespace retrofit::test {

/// compile_commands.json text for units given relative to `root`.
inline std::string compdb_json(const fs::path& root, const std::vector<std::string>& units,
                               const std::string& flags = "") {
  std::string out = "[\n";
  for (size_t i = 0; i < units.size(); ++i) {
    fs::path file = root / units[i];
    out += "  {\"directory\": \"" + file.parent_path().string() + "\", \"command\": \"c++ " + flags + " -c " +
           file.filename().string() + "\", \"file\": \"" + file.string() + "\"}";
    out += i + 1 < units.size() ? ",\n" : "\n";
  }
  return out + "]\n";
}

}  // namespace retrofit::test
