#include "pbtbench/driver/driver.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "pbtbench/build_paths.hpp"
#include "pbtbench/util/fs.hpp"
#include "pbtbench/util/hash.hpp"
#include "pbtbench/util/process.hpp"
#include "pbtbench/util/template.hpp"
#include "pbtbench/version.hpp"

namespace pbtbench::driver {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr double kBuildTimeout = 900;

std::string format_number(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc() ? end : buf);
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const auto t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char frac[8];
  std::snprintf(frac, sizeof frac, ".%03dZ", static_cast<int>(ms));
  return std::string(buf) + frac;
}

std::string tail(std::string_view s, std::size_t n) {
  return std::string(s.size() > n ? s.substr(s.size() - n) : s);
}

bool under_root(const fs::path& rel, const std::vector<std::string>& roots) {
  const std::string r = rel.generic_string();
  return std::any_of(roots.begin(), roots.end(), [&](const std::string& root) {
    const std::string prefix = fs::path(root).lexically_normal().generic_string();
    return prefix == "." || r.rfind(prefix + "/", 0) == 0;
  });
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t experiment_seed, const std::string& task_id, const std::string& strategy,
                          int trial) {
  std::uint64_t h = util::splitmix64(experiment_seed);
  h = util::hash_combine(h, util::fnv1a(task_id));
  h = util::hash_combine(h, util::fnv1a(strategy));
  return util::hash_combine(h, static_cast<std::uint64_t>(trial));
}

std::map<fs::path, std::string> render_workload(const schema::LoadedWorkload& wl, const std::string& mutant) {
  const mutation::MutantRef* target = nullptr;
  if (!mutant.empty() && mutant != "base") {
    for (const auto& m : wl.mutants) {
      if (m.name != mutant) continue;
      if (target) {
        throw mutation::MutationError(mutation::ErrorKind::AmbiguousMutant, 0, 0,
                                      "mutant '" + mutant + "' appears in " + target->file.generic_string() +
                                          " and " + m.file.generic_string());
      }
      target = &m;
    }
    if (!target) {
      throw mutation::MutationError(mutation::ErrorKind::UnknownMutant, 0, 0,
                                    "workload '" + wl.config.name + "' has no mutant '" + mutant + "'");
    }
  }

  std::map<fs::path, std::string> files;
  std::vector<fs::path> paths;
  for (const auto& entry : fs::recursive_directory_iterator(wl.dir)) {
    if (entry.is_regular_file()) paths.push_back(fs::relative(entry.path(), wl.dir));
  }
  for (const auto& rel : paths) {
    std::string text = util::read_file(wl.dir / rel);
    const auto style = wl.config.comment_styles.find(rel.extension().string());
    if (style != wl.config.comment_styles.end() && under_root(rel, wl.config.source_roots)) {
      try {
        const auto parsed = mutation::parse_variations(text, style->second);
        auto sel = mutation::all_base(parsed);
        if (target && target->file == rel) sel[target->variation] = target->name;
        text = mutation::render(parsed, sel);
      } catch (const mutation::MutationError& e) {
        throw mutation::MutationError(e.kind(), e.offset(), e.line(), rel.generic_string() + ": " + e.what());
      }
    }
    files.emplace(rel, std::move(text));
  }
  return files;
}

fs::path apply_mutant(const schema::LoadedWorkload& wl, const std::string& mutant, const fs::path& dest) {
  const auto files = render_workload(wl, mutant);
  if (fs::exists(dest)) fs::remove_all(dest);
  for (const auto& [rel, text] : files) {
    fs::create_directories((dest / rel).parent_path());
    util::write_file_atomic(dest / rel, text);
  }
  return dest;
}

Toolchain Toolchain::current() { return {build_paths::cxx, build_paths::include_dir, build_paths::core_lib}; }

BuildCache::BuildCache(fs::path root, Toolchain toolchain) : root_(fs::absolute(root).lexically_normal()), toolchain_(std::move(toolchain)) {
  // A changed library or header must not reuse binaries built against the old one.
  std::string material = toolchain_.cxx + '\n' + toolchain_.include_dir + '\n';
  if (fs::exists(toolchain_.core_lib)) material += util::content_digest(util::read_file(toolchain_.core_lib));
  if (fs::is_directory(toolchain_.include_dir)) {
    std::set<fs::path> headers;
    for (const auto& e : fs::recursive_directory_iterator(toolchain_.include_dir)) {
      if (e.is_regular_file()) headers.insert(e.path());
    }
    for (const auto& h : headers) material += h.generic_string() + util::content_digest(util::read_file(h));
  }
  toolchain_digest_ = util::content_digest(material);
}

BuildResult BuildCache::build(const schema::LoadedWorkload& wl, const std::string& mutant) {
  const auto files = render_workload(wl, mutant);
  std::string material = toolchain_digest_ + '\n' + wl.config.build + '\n';
  for (const auto& [rel, text] : files) {
    material += rel.generic_string() + '\n' + std::to_string(text.size()) + '\n' + text;
  }

  BuildResult r;
  r.build_id = util::content_digest(material);
  const fs::path dir = root_ / r.build_id;
  r.staged = dir / "staged";
  r.binary = dir / "child";
  if (fs::exists(dir / "ok")) {
    r.ok = true;
    r.cached = true;
    return r;
  }

  if (fs::exists(dir)) fs::remove_all(dir);
  for (const auto& [rel, text] : files) {
    fs::create_directories((r.staged / rel).parent_path());
    util::write_file_atomic(r.staged / rel, text);
  }
  const std::string cmd = util::expand(wl.config.build, {{"cxx", toolchain_.cxx},
                                                         {"include", toolchain_.include_dir},
                                                         {"lib", toolchain_.core_lib},
                                                         {"staged", r.staged.string()},
                                                         {"out", r.binary.string()},
                                                         {"workload", wl.config.name}});
  const auto proc = util::run_shell(cmd, kBuildTimeout, r.staged);
  r.build_time_s = proc.elapsed_s;
  r.log = "$ " + cmd + "\n" + proc.out + proc.err;
  util::write_file_atomic(dir / "build.log", r.log);
  r.ok = !proc.timed_out && !proc.signaled && proc.exit_code == 0;
  if (r.ok) util::write_file_atomic(dir / "ok", "");
  return r;
}

std::string trial_command(const TrialRequest& req, const schema::LoadedWorkload& wl, const BuildResult& build) {
  std::string cmd = util::expand(wl.config.run, {{"property", req.task.property},
                                                 {"mutant", req.task.mutant},
                                                 {"strategy", req.strategy.name},
                                                 {"seed", std::to_string(req.seed)},
                                                 {"timeout_s", format_number(req.timeout_s)},
                                                 {"max_tests", std::to_string(req.max_tests)},
                                                 {"max_discards", std::to_string(req.max_discards)},
                                                 {"workload", req.task.workload},
                                                 {"staged", build.staged.string()},
                                                 {"out", build.binary.string()}});
  for (const auto& a : req.strategy.args) cmd += " " + util::shell_quote(a);
  return cmd;
}

TrialResult run_trial(const TrialRequest& req, const schema::LoadedWorkload& wl, const BuildResult& build) {
  TrialResult r;
  if (!build.ok) {
    r.status = TrialStatus::Error;
    r.message = "build failed: " + tail(build.log, 2000);
    return r;
  }
  util::ProcessResult proc;
  try {
    proc = util::run_shell(trial_command(req, wl, build), req.timeout_s, build.staged);
  } catch (const std::exception& e) {
    r.status = TrialStatus::Error;
    r.message = std::string("SpawnFailure: ") + e.what();
    return r;
  }

  auto timed_out = [&](std::uint64_t tests, std::uint64_t discards) {
    TrialResult t;
    t.status = TrialStatus::Timeout;
    t.time_s = std::max(proc.elapsed_s, req.timeout_s);
    t.tests = tests;
    t.discards = discards;
    return t;
  };
  if (proc.timed_out) return timed_out(0, 0);

  try {
    r = parse_trial_output(proc.out);
  } catch (const ProtocolViolation& e) {
    r = TrialResult{};
    r.status = TrialStatus::Error;
    r.time_s = proc.elapsed_s;
    r.message = std::string(e.what()) + "\n--- stdout ---\n" + tail(proc.out, 2000) + "\n--- stderr ---\n" +
                tail(proc.err, 2000);
    return r;
  }
  const bool clean_exit = !proc.signaled && proc.exit_code == 0;
  if (r.status != TrialStatus::Error && !clean_exit) {
    r.status = TrialStatus::Error;
    r.counterexample.reset();
    r.message = "child reported a result but exited with " +
                (proc.signaled ? "signal " + std::to_string(proc.signal) : "code " + std::to_string(proc.exit_code)) +
                "\n--- stderr ---\n" + tail(proc.err, 2000);
    return r;
  }
  // A child that stopped at its own deadline, or found the bug only after
  // it, did not solve the task within the timeout.
  if ((r.status == TrialStatus::GaveUp && r.time_s >= req.timeout_s) ||
      (r.status == TrialStatus::Found && r.time_s > req.timeout_s)) {
    return timed_out(r.tests, r.discards);
  }
  return r;
}

ordered_json to_json(const RawRecord& rec) {
  const auto& q = rec.request;
  const auto& r = rec.result;
  auto opt = [](const auto& o) { return o ? ordered_json(*o) : ordered_json(nullptr); };
  ordered_json j;
  j["task"] = q.task.id();
  j["workload"] = q.task.workload;
  j["property"] = q.task.property;
  j["mutant"] = q.task.mutant;
  j["strategy"] = q.strategy.name;
  j["trial"] = q.trial;
  j["seed"] = q.seed;
  j["timeout_s"] = q.timeout_s;
  j["max_tests"] = q.max_tests;
  j["max_discards"] = q.max_discards;
  j["status"] = to_string(r.status);
  j["time_s"] = r.time_s;
  j["tests"] = r.tests;
  j["discards"] = r.discards;
  j["counterexample"] = opt(r.counterexample);
  j["gen_time_s"] = opt(r.gen_time_s);
  j["exec_time_s"] = opt(r.exec_time_s);
  j["message"] = opt(r.message);
  j["started_at"] = rec.started_at;
  j["build_id"] = rec.build_id;
  j["tool_version"] = rec.tool_version;
  return j;
}

RawRecord record_from_json(const json& j) {
  std::vector<std::string> problems;
  RawRecord rec;
  if (!j.is_object()) throw ProtocolViolation({"record is not a JSON object"});

  auto str = [&](const char* key, bool required) -> std::optional<std::string> {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
      if (required) problems.push_back(std::string("missing ") + key);
      return std::nullopt;
    }
    if (!it->is_string()) {
      problems.push_back(std::string(key) + " must be a string");
      return std::nullopt;
    }
    return it->get<std::string>();
  };
  auto num = [&](const char* key, bool required) -> std::optional<double> {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
      if (required) problems.push_back(std::string("missing ") + key);
      return std::nullopt;
    }
    if (!it->is_number() || it->get<double>() < 0) {
      problems.push_back(std::string(key) + " must be a non-negative number");
      return std::nullopt;
    }
    return it->get<double>();
  };
  auto count = [&](const char* key, bool required) -> std::optional<std::uint64_t> {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
      if (required) problems.push_back(std::string("missing ") + key);
      return std::nullopt;
    }
    if (!it->is_number_unsigned()) {
      problems.push_back(std::string(key) + " must be a non-negative integer");
      return std::nullopt;
    }
    return it->get<std::uint64_t>();
  };

  if (auto task = str("task", true)) {
    const auto a = task->find('/');
    const auto b = a == std::string::npos ? a : task->find('/', a + 1);
    if (b == std::string::npos || task->find('/', b + 1) != std::string::npos) {
      problems.push_back("task must have the form workload/property/mutant");
    } else {
      rec.request.task = {task->substr(0, a), task->substr(a + 1, b - a - 1), task->substr(b + 1)};
    }
  }
  if (auto s = str("strategy", true)) rec.request.strategy.name = *s;
  if (auto t = count("trial", true)) rec.request.trial = static_cast<int>(*t);
  if (auto s = count("seed", true)) rec.request.seed = *s;
  if (auto t = num("timeout_s", false)) rec.request.timeout_s = *t;
  if (auto t = count("max_tests", false)) rec.request.max_tests = *t;
  if (auto t = count("max_discards", false)) rec.request.max_discards = *t;
  if (auto s = str("status", true)) {
    if (auto st = parse_status(*s)) {
      rec.result.status = *st;
    } else {
      problems.push_back("unknown status '" + *s + "'");
    }
  }
  if (auto t = num("time_s", true)) rec.result.time_s = *t;
  if (auto t = count("tests", true)) rec.result.tests = *t;
  if (auto t = count("discards", true)) rec.result.discards = *t;
  rec.result.counterexample = str("counterexample", false);
  rec.result.gen_time_s = num("gen_time_s", false);
  rec.result.exec_time_s = num("exec_time_s", false);
  rec.result.message = str("message", false);
  if (rec.result.status == TrialStatus::Found && !rec.result.counterexample) {
    problems.push_back("status found requires a counterexample");
  }
  rec.started_at = str("started_at", true).value_or("");
  rec.build_id = str("build_id", true).value_or("");
  rec.tool_version = str("tool_version", false).value_or("");

  if (!problems.empty()) throw ProtocolViolation(std::move(problems));
  return rec;
}

std::vector<RawRecord> read_results(const fs::path& path) {
  std::vector<RawRecord> out;
  const std::string text = util::read_file(path);
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const bool terminated = nl != std::string::npos;
    const std::string_view line(text.data() + pos, (terminated ? nl : text.size()) - pos);
    pos = terminated ? nl + 1 : text.size();
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      // An interrupted writer can leave one partial final line; it was never a record.
      if (!terminated) break;
      throw ProtocolViolation({path.string() + ":" + std::to_string(line_no) + ": not valid JSON"});
    }
    try {
      out.push_back(record_from_json(j));
    } catch (const ProtocolViolation& e) {
      std::vector<std::string> problems;
      for (const auto& p : e.problems()) problems.push_back(path.string() + ":" + std::to_string(line_no) + ": " + p);
      throw ProtocolViolation(std::move(problems));
    }
  }
  return out;
}

std::map<std::string, schema::LoadedWorkload> load_workloads(const schema::TestSpec& spec, const fs::path& experiment) {
  std::map<std::string, schema::LoadedWorkload> out;
  for (const auto& e : spec.entries) {
    if (out.count(e.workload)) continue;
    out.emplace(e.workload, schema::load_workload(experiment / "workloads" / e.workload));
  }
  return out;
}

namespace {

// Drops a trailing partial line so the next append starts on a fresh line.
void repair_tail(const fs::path& path) {
  if (!fs::exists(path)) return;
  const std::string text = util::read_file(path);
  if (text.empty() || text.back() == '\n') return;
  const auto nl = text.rfind('\n');
  fs::resize_file(path, nl == std::string::npos ? 0 : nl + 1);
}

}  // namespace

ExperimentOutcome run_experiment(const schema::TestSpec& spec, const fs::path& results, const DriverOptions& opts) {
  auto log = [&](const std::string& s) {
    if (opts.log) opts.log(s);
  };
  const auto workloads = load_workloads(spec, opts.experiment);
  auto runs = schema::expand_tasks(spec, workloads);

  ExperimentOutcome outcome;
  outcome.results = results;
  if (!results.parent_path().empty()) fs::create_directories(results.parent_path());
  repair_tail(results);

  std::set<std::tuple<std::string, std::string, int, std::uint64_t>> done;
  if (fs::exists(results)) {
    for (const auto& rec : read_results(results)) {
      done.emplace(rec.request.task.id(), rec.request.strategy.name, rec.request.trial, rec.request.seed);
    }
  }

  std::vector<TrialRequest> pending;
  for (auto& run : runs) {
    if (opts.trials) run.trials = *opts.trials;
    if (opts.timeout_s) run.timeout_s = *opts.timeout_s;
    if (opts.max_tests) {
      run.max_tests = *opts.max_tests;
      run.max_discards = *opts.max_tests * 10;
    }
    for (int t = 0; t < run.trials; ++t) {
      TrialRequest req{run.task, run.strategy, t, derive_seed(opts.seed, run.task.id(), run.strategy.name, t),
                       run.timeout_s, run.max_tests, run.max_discards};
      if (done.count({req.task.id(), req.strategy.name, req.trial, req.seed})) {
        ++outcome.skipped;
      } else {
        pending.push_back(std::move(req));
      }
    }
  }
  log(std::to_string(pending.size()) + " trials to run, " + std::to_string(outcome.skipped) + " already recorded");
  if (pending.empty()) return outcome;

  // Builds happen up front so their cost never lands inside a trial's clock.
  BuildCache cache(opts.experiment / ".cache" / "builds", opts.toolchain);
  std::vector<std::pair<std::string, std::string>> keys;
  for (const auto& req : pending) keys.emplace_back(req.task.workload, req.task.mutant);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  // Distinct mutants render to distinct cache directories, so builds can run side by side.
  std::vector<BuildResult> built(keys.size());
  std::mutex log_mutex;
  std::atomic<std::size_t> next_build{0};
  auto builder = [&] {
    for (std::size_t i = next_build++; i < keys.size(); i = next_build++) {
      const auto& [workload, mutant] = keys[i];
      BuildResult b;
      try {
        b = cache.build(workloads.at(workload), mutant);
      } catch (const std::exception& e) {
        b.ok = false;
        b.log = e.what();
      }
      std::lock_guard lock(log_mutex);
      log("build " + workload + "/" + mutant + ": " +
          (b.ok ? (b.cached ? "cached" : "ok in " + format_number(b.build_time_s) + " s") : "FAILED"));
      built[i] = std::move(b);
    }
  };
  {
    std::vector<std::thread> threads;
    for (int j = 1; j < std::max(1, opts.jobs); ++j) threads.emplace_back(builder);
    builder();
    for (auto& t : threads) t.join();
  }
  std::map<std::pair<std::string, std::string>, BuildResult> builds;
  for (std::size_t i = 0; i < keys.size(); ++i) builds.emplace(keys[i], std::move(built[i]));

  std::mutex writer;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pending.size(); i = next++) {
      const auto& req = pending[i];
      const auto& b = builds.at({req.task.workload, req.task.mutant});
      RawRecord rec{req, {}, utc_now(), b.build_id, kVersion};
      rec.result = run_trial(req, workloads.at(req.task.workload), b);
      const std::string line = to_json(rec).dump();
      std::lock_guard lock(writer);
      util::append_line(results, line);
      ++outcome.written;
      if (rec.result.status == TrialStatus::Error) ++outcome.errors;
      log(req.task.id() + " " + req.strategy.name + " #" + std::to_string(req.trial) + ": " +
          std::string(to_string(rec.result.status)) + " " + format_number(rec.result.time_s) + " s");
    }
  };
  const int jobs = std::max(1, opts.jobs);
  std::vector<std::thread> threads;
  for (int j = 1; j < jobs; ++j) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  return outcome;
}

}  // namespace pbtbench::driver
