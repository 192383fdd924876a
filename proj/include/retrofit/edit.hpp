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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace retrofit {

enum class Feature : uint8_t {
  MemberInit,
  Auto,
  Lambda,
  Attribute,
  FinalOverride,
  RangeFor,
  CtorDelegation,
  TypeAlias,
};

inline constexpr std::array<Feature, 8> kAllFeatures = {
    Feature::MemberInit, Feature::Auto,     Feature::Lambda,         Feature::Attribute,
    Feature::FinalOverride, Feature::RangeFor, Feature::CtorDelegation, Feature::TypeAlias};

std::string_view to_string(Feature f);
std::optional<Feature> parse_feature(std::string_view name);

class FeatureSet {
 public:
  FeatureSet() = default;
  FeatureSet(std::initializer_list<Feature> features) {
    for (Feature f : features) add(f);
  }

  void add(Feature f) { bits_ |= bit(f); }
  bool has(Feature f) const { return (bits_ & bit(f)) != 0; }
  bool empty() const { return bits_ == 0; }
  size_t size() const { return static_cast<size_t>(__builtin_popcount(bits_)); }
  std::vector<Feature> list() const;
  std::string to_string() const;  // "{auto, lambda}"

  bool operator==(const FeatureSet&) const = default;

 private:
  static uint32_t bit(Feature f) { return 1u << static_cast<unsigned>(f); }
  uint32_t bits_ = 0;
};

/// Replacement of the byte range [begin, end) of the original text.
inline constexpr uint32_t kNoAnchor = 0xffffffffu;

struct Edit {
  uint32_t begin = 0;
  uint32_t end = 0;
  std::string replacement;
  Feature feature = Feature::Auto;
  std::string note;
  uint32_t group = 0;          // edits of one rewrite share a nonzero group and one region
  uint32_t anchor = kNoAnchor;  // original offset the rewrite traces back to
};

/// 1-based first line and a count; count may be zero (a position between
/// lines, just before `first`).
struct LineRange {
  uint32_t first = 1;
  uint32_t count = 0;

  uint32_t last() const { return first + count - 1; }
  uint32_t end() const { return first + count; }
  bool contains(uint32_t line) const { return line >= first && line < first + count; }
  bool operator==(const LineRange&) const = default;
};

struct Segment {
  bool edited = false;
  LineRange original;
  LineRange transformed;
  std::vector<Feature> features;  // edited segments only, in edit order
  uint32_t anchor = 0;            // edited segments: original line to trace to
};

struct EditRecord {
  uint32_t begin = 0;  // original bytes
  uint32_t end = 0;
  LineRange transformed;
  Feature feature = Feature::Auto;
};

/// Line-level correspondence produced by one apply_edits call. Segments are
/// ordered and tile both texts.
struct SegmentMap {
  uint32_t original_lines = 0;
  uint32_t transformed_lines = 0;
  std::vector<Segment> segments;
  std::vector<EditRecord> edits;
};

struct EditResult {
  std::string text;
  SegmentMap map;
};

/// Applies non-overlapping edits in ascending order. Two insertions at the
/// same offset are kept in the order given. Throws Error(OverlappingEdits).
EditResult apply_edits(std::string_view content, std::vector<Edit> edits);

/// Identity map for a text.
SegmentMap identity_map(std::string_view content);

}  // namespace retrofit
