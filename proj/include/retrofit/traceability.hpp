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

#include <string>
#include <string_view>
#include <vector>

#include "retrofit/edit.hpp"

namespace retrofit {

struct LineSegment {
  bool transformed = false;  // false: identity
  LineRange original;
  LineRange lines;     // in the transformed file
  uint32_t start = 0;  // regions: the line lookups report
  std::vector<Feature> features;
  bool outermost = true;

  bool operator==(const LineSegment&) const = default;
};

/// Original/transformed line correspondence for one file. Identity segments
/// and outermost regions tile the transformed file in order; each region is
/// followed by the regions it swallowed (outermost = false), which share its
/// transformed range.
struct LineMap {
  std::string original_path;
  std::string transformed_path;
  uint32_t original_lines = 0;
  uint32_t transformed_lines = 0;
  std::vector<LineSegment> segments;

  std::vector<LineSegment> tiling() const;
};

/// Composes per-phase maps, in phase order. An empty list gives the identity map.
LineMap build_linemap(std::string original_path, std::string transformed_path, uint32_t original_lines,
                      const std::vector<SegmentMap>& maps);

struct TraceResult {
  std::string path;
  uint32_t line = 0;
  bool exact = false;
};

/// Original line for a 1-based transformed line. Throws Error(LineOutOfRange).
TraceResult lookup(const LineMap& map, uint32_t transformed_line);

/// `<file>.trace` sidecar text and its parser (Error(MalformedTrace)).
std::string format_trace(const LineMap& map);
LineMap parse_trace(std::string_view text);

std::string trace_path(std::string_view transformed_path);
void write_trace(const LineMap& map, const std::string& path);
LineMap read_trace(const std::string& path);

}  // namespace retrofit
