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


#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "retrofit/error.hpp"
#include "retrofit/traceability.hpp"

namespace retrofit {

std::vector<LineSegment> LineMap::tiling() const {
  std::vector<LineSegment> out;
  for (const LineSegment& s : segments)
    if (s.outermost) out.push_back(s);
  return out;
}

namespace {

constexpr int kIdentity = -1;

struct LineInfo {
  int region = kIdentity;
  uint32_t original = 0;  // identity lines only
};

struct Region {
  LineRange original;
  uint32_t start = 0;
  std::vector<Feature> features;
  std::vector<LineSegment> nested;
};

void add_features(std::vector<Feature>& into, const std::vector<Feature>& from) {
  for (Feature f : from)
    if (std::find(into.begin(), into.end(), f) == into.end()) into.push_back(f);
}

void widen(LineRange& r, LineRange by, bool& empty) {
  if (empty) {
    r = by;
    empty = false;
    return;
  }
  uint32_t first = std::min(r.first, by.first);
  uint32_t end = std::max(r.end(), by.end());
  r = {first, end - first};
}

struct DisjointSets {
  std::vector<int> parent;
  int add() {
    parent.push_back(static_cast<int>(parent.size()));
    return parent.back();
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  // The root stays with `a`, the newer region.
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[b] = a;
  }
};

class Composer {
 public:
  explicit Composer(uint32_t lines) : lines_(lines) {
    for (uint32_t i = 0; i < lines; ++i) lines_[i].original = i + 1;
  }

  void apply(const SegmentMap& map) {
    size_t old_count = regions_.size();
    DisjointSets sets;
    for (size_t i = 0; i < old_count; ++i) sets.add();
    std::vector<Region> members = regions_;
    std::vector<std::pair<int, LineRange>> fresh_lines;  // member id, transformed lines
    std::vector<LineInfo> next(map.transformed_lines);

    for (const Segment& s : map.segments) {
      if (!s.edited) {
        for (uint32_t i = 0; i < s.transformed.count && s.original.first - 1 + i < lines_.size(); ++i)
          next[s.transformed.first - 1 + i] = lines_[s.original.first - 1 + i];
        continue;
      }
      int id = sets.add();
      Region r;
      r.features = s.features;
      bool empty = true;
      for (uint32_t l = s.original.first; l < s.original.end() && l <= lines_.size(); ++l) {
        const LineInfo& info = lines_[l - 1];
        if (info.region == kIdentity) {
          widen(r.original, {info.original, 1}, empty);
        } else {
          widen(r.original, regions_[info.region].original, empty);
          sets.unite(id, info.region);
        }
      }
      if (s.original.count == 0) {
        uint32_t p = s.original.first;
        if (p >= 2 && p <= lines_.size() && lines_[p - 2].region != kIdentity &&
            lines_[p - 2].region == lines_[p - 1].region)
          sets.unite(id, lines_[p - 1].region);
      }
      if (empty) r.original = {anchor(s.original.first), 0};
      r.start = s.anchor != 0 ? trace(s.anchor) : r.original.first;
      members.push_back(std::move(r));
      fresh_lines.emplace_back(id, s.transformed);
    }
    for (const auto& [id, range] : fresh_lines)
      for (uint32_t l = range.first; l < range.end(); ++l) next[l - 1] = {id, 0};

    // The member with the earliest start (then the widest span, then the
    // oldest) is the outermost; the others become nested.
    std::map<int, std::vector<int>> groups;
    for (size_t i = 0; i < members.size(); ++i) groups[sets.find(static_cast<int>(i))].push_back(static_cast<int>(i));
    std::vector<Region> merged;
    std::vector<int> index(members.size(), -1);
    for (auto& [root, ids] : groups) {
      auto better = [&](int a, int b) {
        const Region& x = members[a];
        const Region& y = members[b];
        if (x.start != y.start) return x.start < y.start;
        if (x.original.count != y.original.count) return x.original.count > y.original.count;
        return a < b;
      };
      int win = *std::min_element(ids.begin(), ids.end(), better);
      Region m = members[win];
      bool empty = false;
      for (int id : ids) {
        if (id == win) continue;
        const Region& r = members[id];
        widen(m.original, r.original, empty);
        add_features(m.features, r.features);
        LineSegment ls;
        ls.transformed = true;
        ls.original = r.original;
        ls.start = r.start;
        ls.features = r.features;
        ls.outermost = false;
        m.nested.push_back(ls);
        m.nested.insert(m.nested.end(), r.nested.begin(), r.nested.end());
      }
      index[root] = static_cast<int>(merged.size());
      merged.push_back(std::move(m));
    }
    for (LineInfo& info : next)
      if (info.region != kIdentity) info.region = index[sets.find(info.region)];
    regions_ = std::move(merged);
    lines_ = std::move(next);
  }

  LineMap finish(std::string original_path, std::string transformed_path, uint32_t original_lines) const {
    LineMap m;
    m.original_path = std::move(original_path);
    m.transformed_path = std::move(transformed_path);
    m.original_lines = original_lines;
    m.transformed_lines = static_cast<uint32_t>(lines_.size());
    for (uint32_t i = 0; i < lines_.size();) {
      const LineInfo& info = lines_[i];
      uint32_t j = i + 1;
      if (info.region == kIdentity) {
        while (j < lines_.size() && lines_[j].region == kIdentity && lines_[j].original == info.original + (j - i)) ++j;
        LineSegment s;
        s.original = {info.original, j - i};
        s.lines = {i + 1, j - i};
        m.segments.push_back(s);
      } else {
        while (j < lines_.size() && lines_[j].region == info.region) ++j;
        const Region& r = regions_[info.region];
        LineSegment s;
        s.transformed = true;
        s.original = r.original;
        s.start = r.start;
        s.lines = {i + 1, j - i};
        s.features = r.features;
        m.segments.push_back(s);
        for (LineSegment n : r.nested) {
          n.lines = s.lines;
          m.segments.push_back(n);
        }
      }
      i = j;
    }
    return m;
  }

 private:
  // Original line at or just after the position before current line `p`.
  uint32_t anchor(uint32_t p) const {
    if (p >= 1 && p <= lines_.size()) {
      const LineInfo& info = lines_[p - 1];
      return info.region == kIdentity ? info.original : regions_[info.region].original.first;
    }
    if (lines_.empty()) return 1;
    const LineInfo& last = lines_.back();
    return (last.region == kIdentity ? last.original : regions_[last.region].original.last()) + 1;
  }

  // Original line a current line traces to.
  uint32_t trace(uint32_t line) const {
    if (line < 1 || line > lines_.size()) return anchor(line);
    const LineInfo& info = lines_[line - 1];
    return info.region == kIdentity ? info.original : regions_[info.region].start;
  }

  std::vector<LineInfo> lines_;
  std::vector<Region> regions_;
};

}  // namespace

LineMap build_linemap(std::string original_path, std::string transformed_path, uint32_t original_lines,
                      const std::vector<SegmentMap>& maps) {
  Composer c(original_lines);
  for (const SegmentMap& m : maps) c.apply(m);
  return c.finish(std::move(original_path), std::move(transformed_path), original_lines);
}

TraceResult lookup(const LineMap& map, uint32_t transformed_line) {
  if (transformed_line < 1 || transformed_line > map.transformed_lines)
    throw Error(ErrorKind::LineOutOfRange, "line " + std::to_string(transformed_line) + " of " +
                                               map.transformed_path + " (" +
                                               std::to_string(map.transformed_lines) + " lines)");
  for (const LineSegment& s : map.segments) {
    if (!s.outermost || !s.lines.contains(transformed_line)) continue;
    if (!s.transformed) return {map.original_path, s.original.first + (transformed_line - s.lines.first), true};
    uint32_t line = std::clamp<uint32_t>(s.start, 1, std::max<uint32_t>(map.original_lines, 1));
    return {map.original_path, line, false};
  }
  throw Error(ErrorKind::LineOutOfRange, "line " + std::to_string(transformed_line) + " is not covered");
}

// ---- sidecar ----------------------------------------------------------------

namespace {

std::string range_text(LineRange r) { return std::to_string(r.first) + " " + std::to_string(r.first + r.count - 1); }

}  // namespace

std::string format_trace(const LineMap& map) {
  std::ostringstream out;
  out << "# retrofit trace 1\n";
  out << "# original " << map.original_path << "\n";
  out << "# transformed " << map.transformed_path << "\n";
  out << "# lines " << map.original_lines << " " << map.transformed_lines << "\n";
  for (const LineSegment& s : map.segments) {
    out << "O " << range_text(s.original) << " T " << range_text(s.lines);
    if (s.transformed) {
      out << " X ";
      for (size_t i = 0; i < s.features.size(); ++i) out << (i ? "," : "") << to_string(s.features[i]);
      if (s.features.empty()) out << "-";
      if (s.start != s.original.first) out << " S " << s.start;
      if (!s.outermost) out << " inner";
    }
    out << "\n";
  }
  return out.str();
}

namespace {

[[noreturn]] void malformed(size_t line, const std::string& why) {
  throw Error(ErrorKind::MalformedTrace, "line " + std::to_string(line) + ": " + why);
}

uint32_t number(std::string_view s, size_t line) {
  uint32_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) malformed(line, "bad number '" + std::string(s) + "'");
  return v;
}

LineRange range_of(std::string_view a, std::string_view b, size_t line) {
  uint32_t first = number(a, line);
  uint32_t last = number(b, line);
  if (last + 1 < first) malformed(line, "inverted range");
  return {first, last + 1 - first};
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

LineMap parse_trace(std::string_view text) {
  LineMap map;
  bool have_lines = false;
  size_t n = 0;
  while (!text.empty()) {
    size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++n;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.starts_with("# original ")) {
      map.original_path = std::string(line.substr(11));
    } else if (line.starts_with("# transformed ")) {
      map.transformed_path = std::string(line.substr(14));
    } else if (line.starts_with("# lines ")) {
      auto w = words(line.substr(8));
      if (w.size() != 2) malformed(n, "expected two line counts");
      map.original_lines = number(w[0], n);
      map.transformed_lines = number(w[1], n);
      have_lines = true;
    } else if (line.front() == '#') {
      continue;
    } else {
      auto w = words(line);
      if (w.size() < 6 || w[0] != "O" || w[3] != "T") malformed(n, "expected 'O a b T c d'");
      LineSegment s;
      s.original = range_of(w[1], w[2], n);
      s.lines = range_of(w[4], w[5], n);
      if (w.size() > 6) {
        if (w[6] != "X" || w.size() < 8) malformed(n, "expected 'X <feature>'");
        s.transformed = true;
        s.start = s.original.first;
        if (w[7] != "-") {
          std::string_view list = w[7];
          while (!list.empty()) {
            size_t c = list.find(',');
            auto f = parse_feature(list.substr(0, c));
            if (!f) malformed(n, "unknown feature '" + std::string(list.substr(0, c)) + "'");
            s.features.push_back(*f);
            list = c == std::string_view::npos ? std::string_view{} : list.substr(c + 1);
          }
        }
        for (size_t k = 8; k < w.size(); ++k) {
          if (w[k] == "inner") {
            s.outermost = false;
          } else if (w[k] == "S" && k + 1 < w.size()) {
            s.start = number(w[++k], n);
          } else {
            malformed(n, "unexpected '" + std::string(w[k]) + "'");
          }
        }
      }
      map.segments.push_back(std::move(s));
    }
  }
  if (!have_lines) malformed(n, "missing line counts");
  uint32_t next = 1;
  for (const LineSegment& s : map.tiling()) {
    if (s.lines.first != next) malformed(n, "segments do not tile the transformed file");
    next = s.lines.end();
  }
  if (next != map.transformed_lines + 1) malformed(n, "segments do not cover the transformed file");
  return map;
}

std::string trace_path(std::string_view transformed_path) { return std::string(transformed_path) + ".trace"; }

void write_trace(const LineMap& map, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << format_trace(map);
  if (!out) throw Error(ErrorKind::CopyFailure, "cannot write " + path);
}

LineMap read_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::UnreadableFile, path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_trace(ss.str());
}

}  // namespace retrofit
