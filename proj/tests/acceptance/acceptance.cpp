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


// Acceptance checks, one line per criterion. `acceptance [--only N]...`

#include <fmt/core.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "../support/fixtures.hpp"
#include "retrofit/compdb.hpp"
#include "retrofit/incremental.hpp"
#include "retrofit/pipeline.hpp"
#include "retrofit/source.hpp"
#include "retrofit/traceability.hpp"
#include "retrofit/transforms.hpp"

using namespace retrofit;
using namespace retrofit::test;

namespace {

// Pinned thresholds.
constexpr double kListingMillis = 1000;
constexpr double kSpeedupRatio = 0.75;
constexpr size_t kMinDrivers = 20;
constexpr size_t kMinScalingUnits = 200;
const std::map<std::string, size_t> kCorpusMinimum = {
    {"member_init", 3}, {"auto", 37},     {"lambda", 31},          {"attribute", 3},
    {"final_override", 3}, {"range_for", 9}, {"ctor_delegation", 2}, {"type_alias", 3}};
constexpr size_t kCorpusTotal = 91;

const std::map<std::string, Feature> kCorpusFeature = {
    {"member_init", Feature::MemberInit},       {"auto", Feature::Auto},
    {"lambda", Feature::Lambda},                {"attribute", Feature::Attribute},
    {"final_override", Feature::FinalOverride}, {"range_for", Feature::RangeFor},
    {"ctor_delegation", Feature::CtorDelegation}, {"type_alias", Feature::TypeAlias}};

const std::map<Feature, std::string> kPassOf = {
    {Feature::MemberInit, "transform_member_init"}, {Feature::Auto, "transform_auto"},
    {Feature::Lambda, "transform_lambda"},          {Feature::Attribute, "strip_attributes"},
    {Feature::FinalOverride, "strip_final_override"}, {Feature::RangeFor, "lower_range_for"},
    {Feature::CtorDelegation, "inline_delegation"}, {Feature::TypeAlias, "rewrite_type_alias"}};

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Verdict {
  enum Kind { Pass, Fail, Skip } kind = Pass;
  std::string detail;
};

Verdict pass(std::string d) { return {Verdict::Pass, std::move(d)}; }
Verdict fail(std::string d) { return {Verdict::Fail, std::move(d)}; }

std::vector<std::string> code_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (const Token& t : tokenize(text).tokens)
    if (!t.is_trivia()) out.emplace_back(t.text);
  return out;
}

struct Snippet {
  std::string feature;  // corpus directory
  std::string rel;      // feature/name.cpp
  std::string text;
  bool driver = false;
};

const fs::path& source_dir() {
  static const fs::path dir = RETROFIT_SOURCE_DIR;
  return dir;
}

const std::vector<Snippet>& corpus() {
  static const std::vector<Snippet> snippets = [] {
    std::vector<Snippet> out;
    fs::path root = source_dir() / "tests" / "corpus";
    for (const auto& e : fs::recursive_directory_iterator(root)) {
      if (!e.is_regular_file() || e.path().extension() != ".cpp") continue;
      Snippet s;
      s.rel = fs::relative(e.path(), root).string();
      s.feature = fs::relative(e.path(), root).begin()->string();
      s.text = read_file(e.path());
      s.driver = s.text.find("int main()") != std::string::npos;
      out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const Snippet& a, const Snippet& b) { return a.rel < b.rel; });
    return out;
  }();
  return snippets;
}

/// The corpus laid out as a project, `copies` times over.
struct CorpusProject {
  TempDir dir{"retrofit-acceptance"};
  std::string root = dir / "proj";
  std::vector<std::string> units;

  explicit CorpusProject(int copies = 1) {
    for (int c = 0; c < copies; ++c)
      for (const Snippet& s : corpus()) {
        std::string rel = copies == 1 ? s.rel : "copy" + std::to_string(c) + "/" + s.rel;
        write_file(root + "/" + rel, s.text);
        units.push_back(rel);
      }
    write_file(root + "/compile_commands.json", compdb_json(root, units));
  }

  RunConfig config(const std::string& workdir, int jobs = 1) const {
    RunConfig c;
    c.project_root = root;
    c.compdb_path = root + "/compile_commands.json";
    c.workdir = workdir;
    c.jobs = jobs;
    return c;
  }
};

size_t total(const std::map<Feature, size_t>& counts) {
  size_t n = 0;
  for (const auto& [f, c] : counts) n += c;
  return n;
}

// ---- 1 ----------------------------------------------------------------------

Verdict golden_catalog() {
  const std::vector<std::string> listings = {"member_init",    "auto",      "lambda", "final_override",
                                             "range_for", "ctor_delegation", "type_alias"};
  fs::path dir = source_dir() / "tests" / "golden";
  double slowest = 0;
  std::vector<std::string> bad;
  for (const auto& name : listings) {
    std::string in = read_file(dir / (name + ".in.cpp"));
    std::string want = read_file(dir / (name + ".out.cpp"));
    auto t0 = Clock::now();
    UnitOutcome o = run_phases(name + ".cpp", in);
    double ms = millis_since(t0);
    slowest = std::max(slowest, ms);
    if (o.failed || code_tokens(o.text) != code_tokens(want) || ms >= kListingMillis) bad.push_back(name);
  }
  std::string d = fmt::format("{}/{} listings match, slowest {:.1f} ms", listings.size() - bad.size(),
                              listings.size(), slowest);
  if (!bad.empty()) return fail(d + "; mismatched: " + fmt::format("{}", fmt::join(bad, ", ")));
  return pass(d);
}

// ---- 2 ----------------------------------------------------------------------

Verdict attribute_deletion() {
  std::string in = read_file(source_dir() / "tests" / "golden" / "attribute.in.cpp");
  UnitOutcome o = run_phases("attribute.cpp", in);
  if (o.failed) return fail("pipeline failed: " + o.failure);
  const std::string& out = o.text;
  // The output must be the input with some runs deleted, each run being
  // attribute specifiers and the spaces around them.
  static const std::regex attr_run(R"(^\s*(\[\[[^\]]*(\][^\]][^\]]*)*\]\]\s*)+$)");
  std::vector<std::string> runs;
  size_t j = 0;
  std::string run;
  for (size_t i = 0; i < in.size(); ++i) {
    if (j < out.size() && in[i] == out[j]) {
      if (!run.empty()) runs.push_back(run);
      run.clear();
      ++j;
    } else {
      run += in[i];
    }
  }
  if (!run.empty()) runs.push_back(run);
  if (j != out.size()) return fail("output is not the input with spans deleted");
  size_t specifiers = 0;
  for (const auto& r : runs) {
    std::string trimmed = r;
    bool whitespace = std::all_of(r.begin(), r.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    if (whitespace) return fail("deleted whitespace outside an attribute: '" + r + "'");
    if (!std::regex_match(r, attr_run)) return fail("deleted a non-attribute span: '" + r + "'");
    for (size_t p = r.find("[["); p != std::string::npos; p = r.find("[[", p + 2)) ++specifiers;
  }
  size_t expected = 0;
  for (size_t p = in.find("[["); p != std::string::npos; p = in.find("[[", p + 2)) ++expected;
  if (out.find("[[") != std::string::npos || specifiers != expected)
    return fail(fmt::format("{} of {} specifiers removed", specifiers, expected));
  return pass(fmt::format("{} specifiers removed in {} spans, remainder byte-identical", specifiers, runs.size()));
}

// ---- 3 ----------------------------------------------------------------------

Verdict corpus_breadth() {
  std::map<std::string, size_t> counts;
  std::vector<std::string> bad;
  for (const Snippet& s : corpus()) {
    ++counts[s.feature];
    auto feature = kCorpusFeature.find(s.feature);
    SyntaxTree before = parse_source(SourceText(s.rel, s.text));
    UnitOutcome o = run_phases(s.rel, s.text);
    bool ok = feature != kCorpusFeature.end() && find_features(before).has(feature->second) && !o.failed;
    if (ok) {
      SyntaxTree after = parse_source(SourceText(s.rel, o.text));
      ok = check_syntax(after).empty() && find_features(after).empty();
    }
    if (!ok) bad.push_back(s.rel);
  }
  std::vector<std::string> short_of;
  for (const auto& [f, n] : kCorpusMinimum)
    if (counts[f] < n) short_of.push_back(fmt::format("{} {}<{}", f, counts[f], n));
  std::string tally;
  for (const auto& [f, n] : counts) tally += fmt::format("{}{}={}", tally.empty() ? "" : " ", f, n);
  std::string d = fmt::format("{} snippets ({}), {} clean", corpus().size(), tally, corpus().size() - bad.size());
  if (corpus().size() < kCorpusTotal || !short_of.empty())
    return fail(d + "; below minimum: " + fmt::format("{}", fmt::join(short_of, ", ")));
  if (!bad.empty()) return fail(d + "; failing: " + fmt::format("{}", fmt::join(bad, ", ")));
  return pass(d);
}

// ---- 4 ----------------------------------------------------------------------

std::string find_compiler() {
  if (const char* env = std::getenv("RETROFIT_REFERENCE_CXX")) return env;
  if (std::system("command -v clang++ >/dev/null 2>&1") == 0) return "clang++";
  return {};
}

std::string shell_quote(const std::string& s) { return "'" + s + "'"; }

Verdict functional_equivalence() {
  std::string cxx = find_compiler();
  if (cxx.empty()) return {Verdict::Skip, "no clang++ found (set RETROFIT_REFERENCE_CXX)"};
  TempDir dir{"retrofit-equivalence"};
  size_t drivers = 0;
  std::vector<std::string> bad;
  for (const Snippet& s : corpus()) {
    if (!s.driver) continue;
    ++drivers;
    UnitOutcome o = run_phases(s.rel, s.text);
    if (o.failed) {
      bad.push_back(s.rel + " (transform)");
      continue;
    }
    std::string stem = dir / std::to_string(drivers);
    write_file(stem + "-11.cpp", s.text);
    write_file(stem + "-03.cpp", o.text);
    std::string c11 = cxx + " -std=c++11 -w -o " + shell_quote(stem + "-11") + " " + shell_quote(stem + "-11.cpp") +
                      " 2>" + shell_quote(stem + "-11.log");
    std::string c03 = cxx + " -std=c++03 -pedantic-errors -Wno-local-type-template-args -o " +
                      shell_quote(stem + "-03") + " " + shell_quote(stem + "-03.cpp") + " 2>" +
                      shell_quote(stem + "-03.log");
    if (std::system(c11.c_str()) != 0) {
      bad.push_back(s.rel + " (C++11 build)");
      continue;
    }
    if (std::system(c03.c_str()) != 0) {
      bad.push_back(s.rel + " (C++03 build)");
      continue;
    }
    int r11 = std::system((shell_quote(stem + "-11") + " >" + shell_quote(stem + "-11.out")).c_str());
    int r03 = std::system((shell_quote(stem + "-03") + " >" + shell_quote(stem + "-03.out")).c_str());
    if (r11 != r03 || read_file(stem + "-11.out") != read_file(stem + "-03.out")) bad.push_back(s.rel + " (output)");
  }
  std::string d = fmt::format("{} drivers, {} equivalent under {}", drivers, drivers - bad.size(), cxx);
  if (drivers < kMinDrivers) return fail(d + fmt::format("; need at least {}", kMinDrivers));
  if (!bad.empty()) return fail(d + "; differing: " + fmt::format("{}", fmt::join(bad, ", ")));
  return pass(d);
}

// ---- 5 ----------------------------------------------------------------------

Verdict idempotence() {
  CorpusProject p;
  std::string first = p.dir / "work1";
  RunSummary s1 = run(p.config(first));
  if (s1.exit_code != 0) return fail(fmt::format("first run failed {} units", s1.failed));
  // The output tree is a project of its own; its database names the originals.
  std::vector<std::string> units = p.units;
  write_file(first + "/compile_commands.json", compdb_json(first, units));
  RunConfig again;
  again.project_root = first;
  again.compdb_path = first + "/compile_commands.json";
  again.workdir = p.dir / "work2";
  RunSummary s2 = run(again);
  size_t edited = 0;
  for (const auto& f : s2.files)
    if (total(f.edit_counts) > 0 || f.failed) ++edited;
  std::string d = fmt::format("{} of {} outputs re-transform with 0 edits", s2.files.size() - edited, s2.files.size());
  if (s2.exit_code != 0 || edited != 0 || total(s2.edit_counts) != 0) return fail(d);
  return pass(d);
}

// ---- 6 ----------------------------------------------------------------------

/// u1 includes a.h and shared.h, u2 includes shared.h and b.h, u3 includes
/// c.h; shared.h includes common.h.
struct TriggerProject {
  TempDir dir{"retrofit-triggers"};
  std::string root = dir / "proj";
  std::string work = dir / "work";

  TriggerProject() {
    write_file(path("inc/common.h"), "#pragma once\ntypedef int common_t;\n");
    write_file(path("inc/shared.h"), "#pragma once\n#include \"common.h\"\nint shared();\n");
    write_file(path("inc/a.h"), "#pragma once\nint a();\n");
    write_file(path("inc/b.h"), "#pragma once\nint b();\n");
    write_file(path("inc/c.h"), "#pragma once\nint c();\n");
    write_file(path("inc/extra.h"), "#pragma once\nint extra();\n");
    write_file(path("src/u1.cpp"), "#include \"a.h\"\n#include \"shared.h\"\nint u1() { return a() + shared(); }\n");
    write_file(path("src/u2.cpp"), "#include \"shared.h\"\n#include \"b.h\"\nint u2() { return b() + shared(); }\n");
    write_file(path("src/u3.cpp"), "#include \"c.h\"\nint u3() { return c(); }\n");
    set_commands("-I../inc", "-I../inc", "-I../inc");
  }

  std::string path(const std::string& rel) const { return root + "/" + rel; }

  void set_commands(const std::string& f1, const std::string& f2, const std::string& f3) const {
    std::string out = "[\n";
    const std::string flags[3] = {f1, f2, f3};
    for (int i = 0; i < 3; ++i) {
      std::string unit = "u" + std::to_string(i + 1) + ".cpp";
      out += "  {\"directory\": \"" + root + "/src\", \"command\": \"c++ " + flags[i] + " -c " + unit +
             "\", \"file\": \"" + root + "/src/" + unit + "\"}" + (i < 2 ? ",\n" : "\n");
    }
    // Keep the database itself from looking touched.
    write_file(root + "/compile_commands.json", out + "]\n");
  }

  /// Rewrites a file but keeps its timestamp, so only the include edges
  /// change.
  void rewrite_keeping_mtime(const std::string& rel, const std::string& text) const {
    auto stamp = fs::last_write_time(path(rel));
    write_file(path(rel), text);
    fs::last_write_time(path(rel), stamp);
  }

  void touch(const std::string& rel) const { bump_mtime(path(rel)); }

  RunConfig config() const {
    RunConfig c;
    c.project_root = root;
    c.compdb_path = root + "/compile_commands.json";
    c.workdir = work;
    return c;
  }

  std::pair<std::set<std::string>, std::set<StaleReason>> stale() const {
    CompilationDatabase db;
    std::set<std::string> units;
    std::set<StaleReason> reasons;
    for (const StaleUnit& s : stale_units(config(), db)) {
      units.insert(fs::path(s.file).stem().string());
      reasons.insert(s.reasons.begin(), s.reasons.end());
    }
    return {units, reasons};
  }
};

struct Scenario {
  std::string name;
  StaleReason trigger;
  std::function<void(const TriggerProject&)> apply;
  std::set<std::string> expected;
};

std::vector<Scenario> scenarios() {
  using R = StaleReason;
  const std::string u1 = "#include \"a.h\"\n#include \"shared.h\"\nint u1() { return a() + shared(); }\n";
  const std::string u3 = "#include \"c.h\"\nint u3() { return c(); }\n";
  return {
      {"u1 touched", R::UnitModified, [](const auto& p) { p.touch("src/u1.cpp"); }, {"u1"}},
      {"u2 touched", R::UnitModified, [](const auto& p) { p.touch("src/u2.cpp"); }, {"u2"}},
      {"u3 touched", R::UnitModified, [](const auto& p) { p.touch("src/u3.cpp"); }, {"u3"}},
      {"u1 flags", R::CommandChanged, [](const auto& p) { p.set_commands("-I../inc -DX", "-I../inc", "-I../inc"); },
       {"u1"}},
      {"u2 flags", R::CommandChanged, [](const auto& p) { p.set_commands("-I../inc", "-O2 -I../inc", "-I../inc"); },
       {"u2"}},
      {"u3 flags", R::CommandChanged, [](const auto& p) { p.set_commands("-I../inc", "-I../inc", "-I ../inc"); },
       {"u3"}},
      {"a.h touched", R::DependencyModified, [](const auto& p) { p.touch("inc/a.h"); }, {"u1"}},
      {"shared.h touched", R::DependencyModified, [](const auto& p) { p.touch("inc/shared.h"); }, {"u1", "u2"}},
      {"common.h touched", R::DependencyModified, [](const auto& p) { p.touch("inc/common.h"); }, {"u1", "u2"}},
      {"u1 gains extra.h", R::DependencyAdded,
       [u1](const auto& p) { p.rewrite_keeping_mtime("src/u1.cpp", "#include \"extra.h\"\n" + u1); }, {"u1"}},
      {"shared.h gains extra.h", R::DependencyAdded,
       [](const auto& p) {
         p.rewrite_keeping_mtime("inc/shared.h", "#pragma once\n#include \"common.h\"\n#include \"extra.h\"\nint shared();\n");
       },
       {"u1", "u2"}},
      {"u3 gains extra.h", R::DependencyAdded,
       [u3](const auto& p) { p.rewrite_keeping_mtime("src/u3.cpp", "#include \"extra.h\"\n" + u3); }, {"u3"}},
      {"u1 drops a.h", R::DependencyRemoved,
       [](const auto& p) {
         p.rewrite_keeping_mtime("src/u1.cpp", "#include \"shared.h\"\nint a();\nint u1() { return a() + shared(); }\n");
       },
       {"u1"}},
      {"shared.h drops common.h", R::DependencyRemoved,
       [](const auto& p) { p.rewrite_keeping_mtime("inc/shared.h", "#pragma once\nint shared();\n"); }, {"u1", "u2"}},
      {"u3 drops c.h", R::DependencyRemoved,
       [](const auto& p) { p.rewrite_keeping_mtime("src/u3.cpp", "int c();\nint u3() { return c(); }\n"); }, {"u3"}},
  };
}

Verdict incremental_matrix() {
  std::vector<std::string> bad;
  auto all = scenarios();
  for (const Scenario& s : all) {
    TriggerProject p;
    if (run(p.config()).exit_code != 0) return fail("baseline run failed");
    s.apply(p);
    auto [units, reasons] = p.stale();
    if (units != s.expected || reasons != std::set<StaleReason>{s.trigger})
      bad.push_back(fmt::format("{} selected {{{}}}", s.name, fmt::join(units, ",")));
  }
  TriggerProject quiet;
  run(quiet.config());
  size_t rerun = quiet.stale().first.size();
  std::string d = fmt::format("{}/{} scenarios exact, no-change rerun selects {}", all.size() - bad.size(),
                              all.size(), rerun);
  if (!bad.empty() || rerun != 0) return fail(d + (bad.empty() ? "" : "; " + fmt::format("{}", fmt::join(bad, "; "))));
  return pass(d);
}

// ---- 7 ----------------------------------------------------------------------

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  size_t b = 0;
  while (b < text.size()) {
    size_t e = text.find('\n', b);
    if (e == std::string::npos) e = text.size();
    out.push_back(text.substr(b, e - b));
    b = e + 1;
  }
  return out;
}

Verdict traceability() {
  CorpusProject p;
  std::string work = p.dir / "work";
  RunSummary s = run(p.config(work));
  if (s.exit_code != 0) return fail("corpus run failed");
  size_t identity = 0, regions = 0;
  std::vector<std::string> bad;
  for (const auto& rel : p.units) {
    std::string out = work + "/" + rel;
    if (!fs::exists(trace_path(out))) {
      bad.push_back(rel + " (no trace)");
      continue;
    }
    LineMap m = read_trace(trace_path(out));
    auto orig = split_lines(read_file(p.root + "/" + rel));
    auto trans = split_lines(read_file(out));
    bool ok = true;
    for (const LineSegment& seg : m.tiling()) {
      if (!seg.transformed) {
        for (uint32_t k = 0; k < seg.lines.count; ++k) {
          uint32_t t = seg.lines.first + k, o = seg.original.first + k;
          TraceResult r = lookup(m, t);
          ok = ok && r.exact && r.line == o && t <= trans.size() && o <= orig.size() && trans[t - 1] == orig[o - 1];
          ++identity;
        }
      } else {
        uint32_t probe = seg.lines.first + seg.lines.count / 2;
        TraceResult r = lookup(m, probe);
        bool inside = seg.original.count == 0 || seg.original.contains(seg.start);
        ok = ok && !r.exact && r.line == seg.start && inside;
        ++regions;
      }
    }
    if (!ok) bad.push_back(rel);
  }
  std::string d = fmt::format("{} files, {} identity lines exact, {} region probes", p.units.size(), identity, regions);
  if (!bad.empty()) return fail(d + "; wrong: " + fmt::format("{}", fmt::join(bad, ", ")));
  return pass(d);
}

// ---- 8 ----------------------------------------------------------------------

size_t tree_hash(const std::string& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    std::string rel = fs::relative(e.path(), dir).string();
    if (!e.is_regular_file() || rel.rfind(".retrofit", 0) == 0) continue;
    std::string text = read_file(e.path());
    // Trace headers name the work directory itself.
    if (rel.ends_with(".trace")) {
      LineMap m = parse_trace(text);
      m.original_path.clear();
      m.transformed_path.clear();
      text = format_trace(m);
    }
    files[rel] = std::move(text);
  }
  size_t h = 0;
  for (const auto& [rel, text] : files)
    h = h * 1000003 ^ std::hash<std::string>{}(rel) ^ (std::hash<std::string>{}(text) << 1);
  return h;
}

Verdict parallel_scaling() {
  int copies = static_cast<int>((kMinScalingUnits + corpus().size() - 1) / corpus().size());
  CorpusProject p(copies);
  std::map<int, size_t> hashes;
  std::map<int, double> wall;
  for (int jobs : {1, 2, 4}) {
    std::string work = p.dir / ("work-j" + std::to_string(jobs));
    RunSummary s = run(p.config(work, jobs));
    if (s.exit_code != 0) return fail(fmt::format("jobs={} run failed {} units", jobs, s.failed));
    wall[jobs] = s.wall_millis;
    hashes[jobs] = tree_hash(work);
  }
  bool same = hashes[1] == hashes[2] && hashes[1] == hashes[4];
  double ratio = wall[4] / wall[1];
  std::string d = fmt::format("{} units, hashes {}, jobs=4/jobs=1 wall {:.0f}/{:.0f} ms = {:.2f} (limit {:.2f}), {} hardware threads",
                              p.units.size(), same ? "identical" : "differ", wall[4], wall[1], ratio, kSpeedupRatio,
                              std::thread::hardware_concurrency());
  if (!same || ratio > kSpeedupRatio || p.units.size() < kMinScalingUnits) return fail(d);
  return pass(d);
}

// ---- 9 ----------------------------------------------------------------------

Verdict feature_finder_savings() {
  CorpusProject p;
  RunSummary s = run(p.config(p.dir / "work"));
  if (s.exit_code != 0) return fail("corpus run failed");
  std::map<std::string, std::set<std::string>> passes;  // unit -> invoked passes
  std::map<std::string, double> millis;
  for (const PhaseLogEntry& e : s.log) {
    passes[e.unit].insert(e.pass);
    millis[e.unit + "\n" + e.pass] += e.millis;
  }
  size_t absent = 0, violations = 0, unlabeled = 0;
  for (const auto& rel : p.units) {
    std::string unit = p.root + "/" + rel;
    FeatureSet present = find_features(parse_source(SourceText(unit, read_file(unit))));
    for (Feature f : kAllFeatures) {
      bool invoked = passes[unit].contains(kPassOf.at(f));
      if (!present.has(f)) {
        ++absent;
        if (invoked || millis[unit + "\n" + kPassOf.at(f)] != 0) ++violations;
      }
    }
    // The labeled feature's pass must have run.
    std::string dir = fs::path(rel).begin()->string();
    if (!passes[unit].contains(kPassOf.at(kCorpusFeature.at(dir)))) ++unlabeled;
  }
  std::string d = fmt::format("{} absent (unit, feature) pairs, {} with the pass invoked; {} units missing their own pass",
                              absent, violations, unlabeled);
  if (violations != 0 || unlabeled != 0 || absent == 0) return fail(d);
  return pass(d);
}

struct Criterion {
  int id;
  const char* name;
  Verdict (*check)();
};

const Criterion kCriteria[] = {
    {1, "golden catalog", golden_catalog},
    {2, "attribute deletion", attribute_deletion},
    {3, "corpus breadth", corpus_breadth},
    {4, "functional equivalence", functional_equivalence},
    {5, "idempotence", idempotence},
    {6, "incremental scenario matrix", incremental_matrix},
    {7, "traceability", traceability},
    {8, "parallel determinism and scaling", parallel_scaling},
    {9, "feature-finder savings", feature_finder_savings},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only.insert(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--only N]...\n", argv[0]);
      return 2;
    }
  }
  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (!only.empty() && !only.contains(c.id)) continue;
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = fail(std::string("exception: ") + e.what());
    }
    const char* tag = v.kind == Verdict::Pass ? "PASS" : v.kind == Verdict::Skip ? "SKIP" : "FAIL";
    std::printf("[%s] %d %s: %s\n", tag, c.id, c.name, v.detail.c_str());
    std::fflush(stdout);
    if (v.kind == Verdict::Fail) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
