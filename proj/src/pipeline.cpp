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


#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "retrofit/error.hpp"
#include "retrofit/pipeline.hpp"
#include "retrofit/traceability.hpp"

namespace retrofit {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string absolute_normalized(const std::string& p) {
  if (p.empty()) return p;
  return normalize_path(fs::absolute(p).string());
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::UnreadableFile, path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::error_code ec;
  fs::create_directories(fs::path(path).parent_path(), ec);
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw Error(ErrorKind::CopyFailure, "cannot write " + path);
  }
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::CopyFailure, "cannot write " + path + ": " + ec.message());
}

/// Runs fn(i) for i in [0, n) on `jobs` threads; stops handing out work once
/// `stop` is set.
void parallel_for(size_t n, int jobs, const std::atomic<bool>* stop, const std::function<void(size_t)>& fn) {
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      if (stop && stop->load()) return;
      size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
      }
    }
  };
  size_t threads = std::min<size_t>(static_cast<size_t>(std::max(jobs, 1)), n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

struct HeaderInfo {
  std::unique_ptr<SyntaxTree> tree;
  AliasTemplateSet aliases;
};

struct Job {
  std::string file;
  bool is_unit = true;
  std::vector<std::string> deps;
};

struct JobResult {
  FileReport report;
  std::vector<PhaseLogEntry> log;
  std::map<std::string, double> phase_millis;
  double io_millis = 0;
  double prep_millis = 0;
};

}  // namespace

RunConfig validate(RunConfig config) {
  if (config.project_root.empty()) throw Error(ErrorKind::InvalidConfig, "project root is required");
  if (config.workdir.empty()) throw Error(ErrorKind::InvalidConfig, "work directory is required");
  if (config.compdb_path.empty()) throw Error(ErrorKind::InvalidConfig, "compilation database is required");
  if (config.jobs < 1) throw Error(ErrorKind::InvalidConfig, "jobs must be at least 1");
  config.project_root = absolute_normalized(config.project_root);
  config.workdir = absolute_normalized(config.workdir);
  config.compdb_path = absolute_normalized(config.compdb_path);
  if (config.workdir == config.project_root)
    throw Error(ErrorKind::InvalidConfig, "work directory equals the project root");
  if (path_is_under(config.project_root, config.workdir))
    throw Error(ErrorKind::InvalidConfig, "project root lies inside the work directory");
  if (path_is_under(config.workdir, config.project_root) && !config.allow_workdir_inside_root)
    throw Error(ErrorKind::InvalidConfig, "work directory lies inside the project root");
  std::error_code ec;
  if (!fs::is_directory(config.project_root, ec))
    throw Error(ErrorKind::InvalidConfig, config.project_root + " is not a directory");
  return config;
}

std::string mirrored_path(const std::string& project_root, const std::string& workdir, const std::string& file) {
  std::string f = normalize_path(file);
  std::string root = normalize_path(project_root);
  if (!path_is_under(f, root)) throw Error(ErrorKind::UnitOutsideRoot, f);
  std::string rel = f.substr(root.size());
  while (!rel.empty() && rel.front() == '/') rel.erase(0, 1);
  return resolve_path(workdir, rel);
}

MirrorReport mirror_tree(const std::string& project_root, const std::string& workdir,
                         const std::set<std::string>* refresh) {
  MirrorReport report;
  std::string root = normalize_path(project_root);
  std::string work = normalize_path(workdir);
  std::error_code ec;
  fs::create_directories(work, ec);
  if (ec) throw Error(ErrorKind::CopyFailure, work + ": " + ec.message());
  fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec), end;
  if (ec) throw Error(ErrorKind::CopyFailure, root + ": " + ec.message());
  for (; it != end; it.increment(ec)) {
    if (ec) throw Error(ErrorKind::CopyFailure, ec.message());
    std::string src = normalize_path(it->path().string());
    if (path_is_under(src, work)) {
      it.disable_recursion_pending();
      continue;
    }
    if (!it->is_regular_file(ec)) continue;
    std::string dst = mirrored_path(root, work, src);
    bool wanted = !refresh || refresh->contains(src) || !fs::exists(dst, ec);
    if (!wanted) {
      ++report.untouched;
      continue;
    }
    fs::create_directories(fs::path(dst).parent_path(), ec);
    fs::copy_file(src, dst, fs::copy_options::overwrite_existing, ec);
    if (ec) throw Error(ErrorKind::CopyFailure, src + ": " + ec.message());
    ++report.copied;
  }
  return report;
}

std::vector<StaleUnit> stale_units(const RunConfig& raw, CompilationDatabase& db) {
  RunConfig config = validate(raw);
  db = load_database(config.compdb_path);
  StateStore store(StateStore::default_path(config.workdir), {.read_only = true});
  auto stale = select_stale(store, db, scan_all(db));
  if (config.force_full) {
    std::vector<StaleUnit> all;
    size_t k = 0;
    for (const auto& e : db.entries) {
      StaleUnit s{&e, e.file, {}};
      if (k < stale.size() && stale[k].unit == &e) s.reasons = stale[k++].reasons;
      all.push_back(std::move(s));
    }
    return all;
  }
  return stale;
}

RunSummary run(const RunConfig& raw) {
  auto t_start = Clock::now();
  RunSummary summary;
  RunConfig config = validate(raw);

  // ---- setup
  CompilationDatabase db = load_database(config.compdb_path);
  for (const auto& e : db.entries)
    if (!path_is_under(e.file, config.project_root)) throw Error(ErrorKind::UnitOutsideRoot, e.file);
  StateStore store(StateStore::default_path(config.workdir));
  bool first = store.created() || store.units().empty();
  ScanSet scans = scan_all(db);
  std::vector<StaleUnit> stale = select_stale(store, db, scans);
  if (config.force_full || first) {
    std::vector<StaleUnit> all;
    size_t k = 0;
    for (const auto& e : db.entries) {
      StaleUnit s{&e, e.file, {}};
      if (k < stale.size() && stale[k].unit == &e) s.reasons = stale[k++].reasons;
      all.push_back(std::move(s));
    }
    stale = std::move(all);
  }
  summary.units_total = db.entries.size();
  summary.skipped = db.entries.size() - stale.size();

  std::set<std::string> unit_files;
  for (const auto& e : db.entries) unit_files.insert(e.file);
  std::set<std::string> refresh;
  std::set<std::string> headers;     // project headers to transform
  std::set<std::string> to_parse;    // every dependency of a stale unit
  for (const auto& s : stale) {
    refresh.insert(s.unit->file);
    for (const auto& [dep, t] : scans.at(s.unit->file).deps) {
      to_parse.insert(dep);
      if (path_is_under(dep, config.project_root) && !unit_files.contains(dep)) {
        refresh.insert(dep);
        headers.insert(dep);
      }
    }
  }
  summary.mirror = mirror_tree(config.project_root, config.workdir, first || config.force_full ? nullptr : &refresh);

  // Headers' own dependencies, resolved with the first including unit's search path.
  std::map<std::string, std::vector<std::string>> header_deps;
  for (const auto& s : stale) {
    auto dirs = extract_include_dirs(*s.unit);
    for (const auto& [dep, t] : scans.at(s.unit->file).deps) {
      if (!headers.contains(dep) || header_deps.contains(dep)) continue;
      CompileCommand as_unit{s.unit->directory, s.unit->command, dep};
      auto& list = header_deps[dep];
      for (const auto& [d, dt] : scan_dependencies(as_unit, dirs).deps) list.push_back(d);
    }
  }
  summary.bucket_millis[std::string(kSetupBucket)] = millis_since(t_start);

  // ---- parse dependencies once
  auto t_headers = Clock::now();
  std::vector<std::string> parse_list(to_parse.begin(), to_parse.end());
  std::vector<HeaderInfo> parsed(parse_list.size());
  parallel_for(parse_list.size(), config.jobs, nullptr, [&](size_t i) {
    std::string text;
    try {
      text = read_text(parse_list[i]);
    } catch (const Error&) {
    }
    parsed[i].tree = std::make_unique<SyntaxTree>(parse_source(SourceText(parse_list[i], std::move(text))));
    parsed[i].aliases = convertible_alias_templates(*parsed[i].tree);
  });
  std::map<std::string, const HeaderInfo*> header_index;
  for (size_t i = 0; i < parse_list.size(); ++i) header_index[parse_list[i]] = &parsed[i];
  summary.bucket_millis[std::string(kHeadersBucket)] = millis_since(t_headers);

  // ---- transform
  std::vector<Job> jobs;
  for (const auto& h : headers) jobs.push_back({h, false, header_deps[h]});
  for (const auto& s : stale) {
    Job j{s.unit->file, true, {}};
    for (const auto& [dep, t] : scans.at(s.unit->file).deps) j.deps.push_back(dep);
    jobs.push_back(std::move(j));
  }
  std::vector<JobResult> results(jobs.size());
  for (size_t i = 0; i < jobs.size(); ++i) {
    results[i].report.file = jobs[i].file;
    results[i].report.is_unit = jobs[i].is_unit;
  }
  std::atomic<bool> stop{false};
  parallel_for(jobs.size(), config.jobs, config.fail_fast ? &stop : nullptr, [&](size_t i) {
    const Job& job = jobs[i];
    JobResult& res = results[i];
    auto t_prep = Clock::now();
    PhaseOptions options;
    for (const auto& dep : job.deps) {
      auto it = header_index.find(dep);
      if (it == header_index.end()) continue;
      options.externals.push_back(it->second->tree.get());
      add_declared_names(*it->second->tree, options.context);
      options.external_aliases.insert(it->second->aliases.begin(), it->second->aliases.end());
    }
    res.prep_millis = millis_since(t_prep);

    auto t_io = Clock::now();
    std::string text = read_text(job.file);
    res.io_millis += millis_since(t_io);

    UnitOutcome out = run_phases(job.file, std::move(text), options);
    res.report.ran = true;
    res.report.features = out.features;
    res.report.edit_counts = out.edit_counts;
    res.report.warnings = out.warnings;
    res.report.failed = out.failed;
    res.report.failure = out.failure;
    res.log = std::move(out.log);
    res.phase_millis = out.phase_millis;

    if (!out.failed) {
      t_io = Clock::now();
      std::string dst = mirrored_path(config.project_root, config.workdir, job.file);
      write_text(dst, out.text);
      LineMap map = build_linemap(job.file, dst, count_lines(out.original), out.maps);
      write_text(trace_path(dst), format_trace(map));
      res.io_millis += millis_since(t_io);
    } else if (config.fail_fast) {
      stop.store(true);
    }
  });

  // A unit is only as good as the project headers it pulls in.
  std::map<std::string, const FileReport*> header_reports;
  for (const auto& r : results)
    if (!r.report.is_unit) header_reports[r.report.file] = &r.report;
  for (size_t i = 0; i < jobs.size(); ++i) {
    FileReport& rep = results[i].report;
    if (!rep.is_unit || !rep.ran || rep.failed) continue;
    for (const auto& dep : jobs[i].deps) {
      auto it = header_reports.find(dep);
      if (it != header_reports.end() && (it->second->failed || !it->second->ran)) {
        rep.failed = true;
        rep.failure = "included header failed: " + dep;
        break;
      }
    }
  }

  std::vector<CompileCommand> committed;
  size_t unit_index = 0;
  for (size_t i = 0; i < jobs.size(); ++i) {
    JobResult& r = results[i];
    if (r.report.is_unit) {
      const CompileCommand& cmd = *stale[unit_index++].unit;
      if (!r.report.ran) ++summary.not_run;
      else if (r.report.failed) ++summary.failed;
      else {
        ++summary.transformed;
        committed.push_back(cmd);
      }
    } else {
      ++summary.headers;
      if (r.report.ran && r.report.failed) ++summary.failed;
      else if (!r.report.ran) ++summary.not_run;
    }
    for (const auto& [f, n] : r.report.edit_counts) summary.edit_counts[f] += n;
    for (const auto& [p, ms] : r.phase_millis) summary.bucket_millis[p] += ms;
    summary.bucket_millis[std::string(kIoBucket)] += r.io_millis;
    summary.bucket_millis[std::string(kHeadersBucket)] += r.prep_millis;
    summary.log.insert(summary.log.end(), r.log.begin(), r.log.end());
    summary.files.push_back(std::move(r.report));
  }

  // ---- commit
  auto t_commit = Clock::now();
  store.commit(committed, scans);
  summary.bucket_millis[std::string(kCommitBucket)] = millis_since(t_commit);

  summary.stale = std::move(stale);
  for (auto& s : summary.stale) s.unit = nullptr;  // the database dies with this frame
  summary.wall_millis = millis_since(t_start);
  summary.exit_code = summary.failed > 0 || summary.not_run > 0 ? 1 : 0;
  return summary;
}

std::string format_report(const RunSummary& s) {
  using nlohmann::json;
  std::string out;
  for (const auto& e : s.log) out += format_log_entry(e) + "\n";
  for (const auto& f : s.files) {
    json j = {{"type", "file"},       {"file", f.file},         {"unit", f.is_unit},
              {"ran", f.ran},         {"failed", f.failed},     {"failure", f.failure},
              {"features", json::array()}, {"edits", json::object()}, {"warnings", f.warnings.size()}};
    for (Feature x : f.features.list()) j["features"].push_back(std::string(to_string(x)));
    for (const auto& [x, n] : f.edit_counts) j["edits"][std::string(to_string(x))] = n;
    out += j.dump() + "\n";
  }
  auto bucket = [&](std::string_view name) {
    auto it = s.bucket_millis.find(std::string(name));
    json j = {{"type", "phase"}, {"phase", std::string(name)}, {"millis", it == s.bucket_millis.end() ? 0.0 : it->second}};
    out += j.dump() + "\n";
  };
  bucket(kSetupBucket);
  bucket(kHeadersBucket);
  for (auto p : kPhaseNames) bucket(p);
  bucket(kIoBucket);
  bucket(kCommitBucket);
  json sum = {{"type", "summary"},
              {"units", s.units_total},
              {"transformed", s.transformed},
              {"skipped", s.skipped},
              {"failed", s.failed},
              {"not_run", s.not_run},
              {"headers", s.headers},
              {"copied", s.mirror.copied},
              {"wall_millis", s.wall_millis},
              {"exit_code", s.exit_code},
              {"edits", json::object()}};
  for (const auto& [x, n] : s.edit_counts) sum["edits"][std::string(to_string(x))] = n;
  out += sum.dump() + "\n";
  return out;
}

}  // namespace retrofit
