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
#include <map>
#include <set>
#include <string>
#include <vector>

#include "retrofit/edit.hpp"
#include "retrofit/semantics.hpp"
#include "retrofit/syntax_tree.hpp"

namespace retrofit {

struct TransformWarning {
  uint32_t line = 0;
  Feature feature = Feature::Auto;
  std::string reason;
};

struct TransformResult {
  std::vector<Edit> edits;
  std::vector<TransformWarning> warnings;
  bool untransformable = false;
  std::string failure;  // set together with untransformable

  void warn(const SyntaxTree& tree, uint32_t token, Feature f, std::string reason);
  void fail(std::string reason) {
    untransformable = true;
    if (failure.empty()) failure = std::move(reason);
  }
};

/// Alias templates declared in other files; their uses in this file need
/// rewriting even though the declaration lives elsewhere.
using AliasTemplateSet = std::set<std::string, std::less<>>;

/// Syntactic feature detection.
FeatureSet find_features(const SyntaxTree& tree, const AliasTemplateSet& external_aliases = {});

/// Diagnostics for a transformed text: lexer problems, unbalanced brackets,
/// unparsed regions and every remaining feature marker.
std::vector<Diagnostic> check_syntax(const SyntaxTree& tree);

/// Names of alias templates declared in `tree` that rewrite_type_alias would
/// convert (skipped aliases are excluded).
AliasTemplateSet convertible_alias_templates(const SyntaxTree& tree);

TransformResult strip_attributes(const SyntaxTree& tree);
TransformResult strip_final_override(const SyntaxTree& tree);
TransformResult rewrite_type_alias(const SyntaxTree& tree, const std::vector<const SyntaxTree*>& externals = {});
TransformResult transform_member_init(const SyntaxTree& tree, const SemanticModel& sema,
                                      const std::vector<const SyntaxTree*>& externals = {});
TransformResult lower_range_for(const SyntaxTree& tree, const SemanticModel& sema);
TransformResult transform_lambda(const SyntaxTree& tree, const SemanticModel& sema);
TransformResult transform_auto(const SyntaxTree& tree, const SemanticModel& sema);
TransformResult inline_delegation(const SyntaxTree& tree, const SemanticModel& sema,
                                  const std::vector<const SyntaxTree*>& externals = {});

/// One invoked pass.
struct PhaseLogEntry {
  std::string unit;
  std::string phase;  // FeatureFinder, ReplaceLambda, MultipleTransforms, RemoveAutoDelegation, SyntaxCheck
  std::string pass;
  size_t edits = 0;
  double millis = 0;
};

std::string format_log_entry(const PhaseLogEntry& entry);

inline constexpr std::array<std::string_view, 5> kPhaseNames = {
    "FeatureFinder", "ReplaceLambda", "MultipleTransforms", "RemoveAutoDelegation", "SyntaxCheck"};

struct PhaseOptions {
  std::vector<const SyntaxTree*> externals;  // parsed headers the unit includes
  ParseContext context;
  AliasTemplateSet external_aliases;
  int max_lambda_rounds = 16;
};

struct UnitOutcome {
  std::string path;
  std::string original;
  std::string text;  // final text; equals `original` when nothing changed
  FeatureSet features;
  std::vector<SegmentMap> maps;  // one per phase that edited, in order
  std::vector<PhaseLogEntry> log;
  std::vector<TransformWarning> warnings;
  std::vector<Diagnostic> diagnostics;
  std::map<Feature, size_t> edit_counts;
  std::map<std::string, double> phase_millis;  // includes parsing and edit application
  bool failed = false;
  std::string failure;

  size_t total_edits() const;
};

/// The full per-unit pipeline.
UnitOutcome run_phases(std::string path, std::string content, const PhaseOptions& options = {});

}  // namespace retrofit
