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


#include <chrono>
#include <functional>
#include <memory>

#include <nlohmann/json.hpp>

#include "retrofit/error.hpp"
#include "retrofit/transforms.hpp"

namespace retrofit {

size_t UnitOutcome::total_edits() const {
  size_t n = 0;
  for (const auto& [f, c] : edit_counts) n += c;
  return n;
}

std::string format_log_entry(const PhaseLogEntry& entry) {
  nlohmann::json j = {{"unit", entry.unit},   {"phase", entry.phase}, {"pass", entry.pass},
                      {"edits", entry.edits}, {"millis", entry.millis}};
  return j.dump();
}

namespace {

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

class UnitRunner {
 public:
  UnitRunner(std::string path, std::string content, const PhaseOptions& options) : options_(options) {
    out_.path = std::move(path);
    out_.original = content;
    out_.text = std::move(content);
  }

  UnitOutcome run() {
    feature_finder();
    if (!out_.failed) replace_lambda();
    if (!out_.failed) multiple_transforms();
    if (!out_.failed) remove_auto_delegation();
    syntax_check();
    return std::move(out_);
  }

 private:
  using Pass = std::function<TransformResult(const SyntaxTree&, const SemanticModel&)>;

  void reparse() { tree_ = std::make_unique<SyntaxTree>(parse_source(SourceText(out_.path, out_.text), options_.context)); }

  const SemanticModel& sema() {
    if (!sema_) sema_ = std::make_unique<SemanticModel>(*tree_, options_.externals);
    return *sema_;
  }

  TransformResult invoke(const char* phase, const char* pass, const Pass& fn) {
    auto t0 = Clock::now();
    TransformResult r = fn(*tree_, sema());
    out_.log.push_back({out_.path, phase, pass, r.edits.size(), millis_since(t0)});
    take_diagnostics(r);
    return r;
  }

  void take_diagnostics(const TransformResult& r) {
    out_.warnings.insert(out_.warnings.end(), r.warnings.begin(), r.warnings.end());
    if (r.untransformable && !out_.failed) {
      out_.failed = true;
      out_.failure = r.failure;
    }
  }

  /// Applies edits, records the map and re-parses. Throws on overlap.
  void commit(std::vector<Edit> edits) {
    if (edits.empty()) return;
    std::vector<Feature> features;
    for (const Edit& e : edits) features.push_back(e.feature);
    EditResult res = apply_edits(out_.text, std::move(edits));
    for (Feature f : features) ++out_.edit_counts[f];
    out_.text = std::move(res.text);
    out_.maps.push_back(std::move(res.map));
    sema_.reset();
    reparse();
  }

  void feature_finder() {
    auto t0 = Clock::now();
    reparse();
    auto p0 = Clock::now();
    out_.features = find_features(*tree_, options_.external_aliases);
    out_.log.push_back({out_.path, "FeatureFinder", "find_features", 0, millis_since(p0)});
    if (tree_->untransformable) {
      out_.failed = true;
      out_.failure = "unbalanced braces";
    }
    out_.phase_millis["FeatureFinder"] = millis_since(t0);
  }

  void replace_lambda() {
    if (!out_.features.has(Feature::Lambda)) return;
    auto t0 = Clock::now();
    for (int round = 0; round < options_.max_lambda_rounds; ++round) {
      TransformResult r = invoke("ReplaceLambda", "transform_lambda", transform_lambda);
      if (r.edits.empty() || out_.failed) break;
      commit(std::move(r.edits));
      if (!find_features(*tree_).has(Feature::Lambda)) break;
    }
    out_.phase_millis["ReplaceLambda"] = millis_since(t0);
  }

  void multiple_transforms() {
    struct Step {
      Feature feature;
      const char* name;
      Pass fn;
    };
    const auto& ext = options_.externals;
    std::vector<Step> steps = {
        {Feature::Attribute, "strip_attributes", [](const SyntaxTree& t, const SemanticModel&) { return strip_attributes(t); }},
        {Feature::FinalOverride, "strip_final_override",
         [](const SyntaxTree& t, const SemanticModel&) { return strip_final_override(t); }},
        {Feature::RangeFor, "lower_range_for", lower_range_for},
        {Feature::TypeAlias, "rewrite_type_alias",
         [&ext](const SyntaxTree& t, const SemanticModel&) { return rewrite_type_alias(t, ext); }},
        {Feature::MemberInit, "transform_member_init",
         [&ext](const SyntaxTree& t, const SemanticModel& s) { return transform_member_init(t, s, ext); }},
    };
    std::erase_if(steps, [&](const Step& s) { return !out_.features.has(s.feature); });
    if (steps.empty()) return;
    auto t0 = Clock::now();
    std::vector<Edit> batch;
    for (const Step& s : steps) {
      TransformResult r = invoke("MultipleTransforms", s.name, s.fn);
      batch.insert(batch.end(), r.edits.begin(), r.edits.end());
    }
    try {
      if (!out_.failed) commit(std::move(batch));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::OverlappingEdits) throw;
      // One pass at a time on fresh trees; warnings were already collected.
      for (const Step& s : steps) {
        auto p0 = Clock::now();
        TransformResult r = s.fn(*tree_, sema());
        out_.log.push_back({out_.path, "MultipleTransforms", s.name, r.edits.size(), millis_since(p0)});
        commit(std::move(r.edits));
      }
    }
    out_.phase_millis["MultipleTransforms"] = millis_since(t0);
  }

  void remove_auto_delegation() {
    bool has_auto = out_.features.has(Feature::Auto);
    bool has_delegation = out_.features.has(Feature::CtorDelegation);
    if (!has_auto && !has_delegation) return;
    auto t0 = Clock::now();
    if (has_auto) commit(invoke("RemoveAutoDelegation", "transform_auto", transform_auto).edits);
    if (has_delegation && !out_.failed) {
      const auto& ext = options_.externals;
      TransformResult r = invoke("RemoveAutoDelegation", "inline_delegation",
                                 [&ext](const SyntaxTree& t, const SemanticModel& s) { return inline_delegation(t, s, ext); });
      if (!out_.failed) commit(std::move(r.edits));
    }
    out_.phase_millis["RemoveAutoDelegation"] = millis_since(t0);
  }

  void syntax_check() {
    auto t0 = Clock::now();
    auto p0 = Clock::now();
    out_.diagnostics = check_syntax(*tree_);
    out_.log.push_back({out_.path, "SyntaxCheck", "check_syntax", 0, millis_since(p0)});
    if (!out_.diagnostics.empty() && !out_.failed) {
      out_.failed = true;
      out_.failure = out_.diagnostics.front().code;
    }
    out_.phase_millis["SyntaxCheck"] = millis_since(t0);
  }

  const PhaseOptions& options_;
  UnitOutcome out_;
  std::unique_ptr<SyntaxTree> tree_;
  std::unique_ptr<SemanticModel> sema_;
};

}  // namespace

UnitOutcome run_phases(std::string path, std::string content, const PhaseOptions& options) {
  return UnitRunner(std::move(path), std::move(content), options).run();
}

}  // namespace retrofit
