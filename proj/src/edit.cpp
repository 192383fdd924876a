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

#include "retrofit/edit.hpp"

#include <algorithm>

#include "retrofit/error.hpp"
#include "retrofit/source.hpp"

namespace retrofit {

std::string_view to_string(Feature f) {
  switch (f) {
    case Feature::MemberInit: return "member-init";
    case Feature::Auto: return "auto";
    case Feature::Lambda: return "lambda";
    case Feature::Attribute: return "attribute";
    case Feature::FinalOverride: return "final-override";
    case Feature::RangeFor: return "range-for";
    case Feature::CtorDelegation: return "ctor-delegation";
    case Feature::TypeAlias: return "type-alias";
  }
  return "?";
}

std::optional<Feature> parse_feature(std::string_view name) {
  for (Feature f : kAllFeatures)
    if (to_string(f) == name) return f;
  return std::nullopt;
}

std::vector<Feature> FeatureSet::list() const {
  std::vector<Feature> out;
  for (Feature f : kAllFeatures)
    if (has(f)) out.push_back(f);
  return out;
}

std::string FeatureSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (Feature f : list()) {
    if (!first) out += ", ";
    first = false;
    out += retrofit::to_string(f);
  }
  return out + "}";
}

namespace {

bool at_line_start(std::string_view text, uint32_t pos) { return pos == 0 || text[pos - 1] == '\n'; }

// Lines touched by the byte range [begin, end), which starts at a line start.
LineRange lines_of(std::string_view text, const std::vector<uint32_t>& starts, uint32_t begin,
                   uint32_t end) {
  LineRange r;
  r.first = static_cast<uint32_t>(std::upper_bound(starts.begin(), starts.end(), begin) - starts.begin());
  std::string_view piece = text.substr(begin, end - begin);
  r.count = static_cast<uint32_t>(std::count(piece.begin(), piece.end(), '\n'));
  if (!piece.empty() && piece.back() != '\n') ++r.count;
  return r;
}

struct Region {
  uint32_t ob, oe;  // original extent
  uint32_t nb, ne;  // new extent
  std::vector<Feature> features;
  std::vector<size_t> edits;
  std::vector<uint32_t> groups;
};

}  // namespace

SegmentMap identity_map(std::string_view content) {
  SegmentMap map;
  map.original_lines = map.transformed_lines = count_lines(content);
  if (map.original_lines > 0) {
    Segment s;
    s.original = {1, map.original_lines};
    s.transformed = {1, map.original_lines};
    map.segments.push_back(s);
  }
  return map;
}

EditResult apply_edits(std::string_view content, std::vector<Edit> edits) {
  std::erase_if(edits, [](const Edit& e) { return e.begin == e.end && e.replacement.empty(); });
  std::stable_sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) {
    if (a.begin != b.begin) return a.begin < b.begin;
    return a.end < b.end;
  });
  for (size_t i = 0; i < edits.size(); ++i) {
    if (edits[i].end < edits[i].begin || edits[i].end > content.size())
      throw Error(ErrorKind::OverlappingEdits, "edit " + std::to_string(i) + " is out of bounds");
    if (i > 0 && edits[i - 1].end > edits[i].begin)
      throw Error(ErrorKind::OverlappingEdits,
                  "edits " + std::to_string(i - 1) + " and " + std::to_string(i) + " overlap");
  }

  EditResult out;
  std::vector<std::pair<uint32_t, uint32_t>> placed;  // new [begin, end) per edit
  uint32_t cursor = 0;
  for (const Edit& e : edits) {
    out.text.append(content.substr(cursor, e.begin - cursor));
    uint32_t nb = static_cast<uint32_t>(out.text.size());
    out.text += e.replacement;
    placed.emplace_back(nb, static_cast<uint32_t>(out.text.size()));
    cursor = e.end;
  }
  out.text.append(content.substr(cursor));
  std::string_view result = out.text;

  SegmentMap& map = out.map;
  map.original_lines = count_lines(content);
  map.transformed_lines = count_lines(result);
  if (edits.empty()) {
    map = identity_map(content);
    return out;
  }

  std::vector<Region> regions;
  for (size_t i = 0; i < edits.size(); ++i) {
    const Edit& e = edits[i];
    auto [nb, ne] = placed[i];
    Region r;
    r.ob = e.begin;
    if (!(at_line_start(content, e.begin) && at_line_start(result, nb)))
      while (r.ob > 0 && content[r.ob - 1] != '\n') --r.ob;
    r.oe = e.end;
    bool clean_end = at_line_start(content, e.end) && at_line_start(result, ne) && (e.end > r.ob || ne > nb);
    if (!clean_end) {
      while (r.oe < content.size() && content[r.oe] != '\n') ++r.oe;
      if (r.oe < content.size()) ++r.oe;
    }
    r.features.push_back(e.feature);
    r.edits.push_back(i);
    if (e.group != 0) r.groups.push_back(e.group);
    if (e.group != 0) {
      // A rewrite's edits form one region even across untouched lines.
      size_t k = 0;
      while (k < regions.size() &&
             std::find(regions[k].groups.begin(), regions[k].groups.end(), e.group) == regions[k].groups.end())
        ++k;
      while (k + 1 < regions.size()) {
        Region last = std::move(regions.back());
        regions.pop_back();
        Region& into = regions.back();
        into.oe = std::max(into.oe, last.oe);
        into.features.insert(into.features.end(), last.features.begin(), last.features.end());
        into.edits.insert(into.edits.end(), last.edits.begin(), last.edits.end());
        into.groups.insert(into.groups.end(), last.groups.begin(), last.groups.end());
      }
    }
    if (!regions.empty()) {
      Region& prev = regions.back();
      bool touching = r.ob == prev.oe && (prev.ob == prev.oe || r.ob == r.oe);
      bool grouped = e.group != 0 && std::find(prev.groups.begin(), prev.groups.end(), e.group) != prev.groups.end();
      if (r.ob < prev.oe || touching || grouped) {
        if (e.group != 0) prev.groups.push_back(e.group);
        prev.oe = std::max(prev.oe, r.oe);
        prev.features.push_back(e.feature);
        prev.edits.push_back(i);
        continue;
      }
    }
    regions.push_back(std::move(r));
  }
  // Region boundaries never fall strictly inside an edit, so they map to the
  // new text by the accumulated length delta.
  auto map_pos = [&](uint32_t pos, bool after_insertions) {
    int64_t delta = 0;
    for (size_t i = 0; i < edits.size(); ++i) {
      const Edit& e = edits[i];
      if (e.end > pos) break;
      if (e.begin == pos && e.end == pos && !after_insertions) break;
      delta += static_cast<int64_t>(e.replacement.size()) - static_cast<int64_t>(e.end - e.begin);
    }
    return static_cast<uint32_t>(pos + delta);
  };
  for (Region& r : regions) {
    r.nb = map_pos(r.ob, false);
    r.ne = map_pos(r.oe, true);
  }

  std::vector<uint32_t> ostarts = line_starts(content);
  std::vector<uint32_t> nstarts = line_starts(result);
  uint32_t oline = 1;
  uint32_t nline = 1;
  for (const Region& r : regions) {
    LineRange o = lines_of(content, ostarts, r.ob, r.oe);
    LineRange n = lines_of(result, nstarts, r.nb, r.ne);
    if (o.first > oline) {
      Segment id;
      id.original = {oline, o.first - oline};
      id.transformed = {nline, n.first - nline};
      map.segments.push_back(id);
    }
    Segment s;
    s.edited = true;
    s.original = o;
    s.transformed = n;
    for (Feature f : r.features)
      if (std::find(s.features.begin(), s.features.end(), f) == s.features.end()) s.features.push_back(f);
    s.anchor = o.count > 0 ? o.first : std::min(o.first, map.original_lines);
    bool anchored = false;
    for (size_t i : r.edits) {
      if (edits[i].anchor == kNoAnchor || edits[i].anchor > content.size()) continue;
      uint32_t line = static_cast<uint32_t>(std::upper_bound(ostarts.begin(), ostarts.end(), edits[i].anchor) -
                                            ostarts.begin());
      if (!anchored || line < s.anchor) s.anchor = line;
      anchored = true;
    }
    map.segments.push_back(s);
    for (size_t i : r.edits) map.edits.push_back({edits[i].begin, edits[i].end, n, edits[i].feature});
    oline = o.end();
    nline = n.end();
  }
  if (oline <= map.original_lines || nline <= map.transformed_lines) {
    Segment id;
    id.original = {oline, map.original_lines + 1 - oline};
    id.transformed = {nline, map.transformed_lines + 1 - nline};
    map.segments.push_back(id);
  }
  return out;
}

}  // namespace retrofit
