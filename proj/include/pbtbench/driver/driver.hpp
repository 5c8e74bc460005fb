#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"
#include "pbtbench/driver/protocol.hpp"
#include "pbtbench/schema/schema.hpp"

namespace pbtbench::driver {

/// seed = hash of (experiment seed, task id, strategy name, trial index).
std::uint64_t derive_seed(std::uint64_t experiment_seed, const std::string& task_id, const std::string& strategy,
                          int trial);

/// Renders every source file of the workload with only `mutant` active
/// ("" or "base" selects the base everywhere). Keys are paths relative to the
/// workload directory; files without variations are included verbatim.
std::map<std::filesystem::path, std::string> render_workload(const schema::LoadedWorkload& wl,
                                                             const std::string& mutant);

/// Writes a scratch copy of the workload with `mutant` active into `dest`
/// (created or replaced). The original directory is not touched.
std::filesystem::path apply_mutant(const schema::LoadedWorkload& wl, const std::string& mutant,
                                   const std::filesystem::path& dest);

struct Toolchain {
  std::string cxx;
  std::string include_dir;
  std::string core_lib;

  /// The compiler and library this binary was built with.
  static Toolchain current();
};

struct BuildResult {
  bool ok = false;
  std::string build_id;
  std::filesystem::path staged;
  std::filesystem::path binary;
  std::string log;
  double build_time_s = 0;
  bool cached = false;
};

/// Content-addressed builds: one build per distinct staged tree, shared by
/// every strategy and trial that needs it.
class BuildCache {
 public:
  BuildCache(std::filesystem::path root, Toolchain toolchain);

  BuildResult build(const schema::LoadedWorkload& wl, const std::string& mutant);

 private:
  std::filesystem::path root_;
  Toolchain toolchain_;
  std::string toolchain_digest_;
};

struct TrialRequest {
  schema::Task task;
  schema::StrategySpec strategy;
  int trial = 0;
  std::uint64_t seed = 0;
  double timeout_s = 60;
  std::uint64_t max_tests = 1'000'000;
  std::uint64_t max_discards = 10'000'000;
};

/// The shell command for one trial.
std::string trial_command(const TrialRequest& req, const schema::LoadedWorkload& wl, const BuildResult& build);

/// Runs a trial under the driver's wall clock. The child is killed at the
/// timeout; a child that stops itself at the deadline is classified as a
/// timeout too.
TrialResult run_trial(const TrialRequest& req, const schema::LoadedWorkload& wl, const BuildResult& build);

struct RawRecord {
  TrialRequest request;
  TrialResult result;
  std::string started_at;
  std::string build_id;
  std::string tool_version;
};

nlohmann::ordered_json to_json(const RawRecord& r);
/// Throws ProtocolViolation listing every problem.
RawRecord record_from_json(const nlohmann::json& j);
std::vector<RawRecord> read_results(const std::filesystem::path& path);

struct DriverOptions {
  std::filesystem::path experiment = ".";
  std::uint64_t seed = 0;
  int jobs = 1;
  std::optional<double> timeout_s;
  std::optional<int> trials;
  std::optional<std::uint64_t> max_tests;
  Toolchain toolchain = Toolchain::current();
  /// Progress lines; may be empty.
  std::function<void(const std::string&)> log;
};

struct ExperimentOutcome {
  std::filesystem::path results;
  std::size_t written = 0;
  std::size_t skipped = 0;
  std::size_t errors = 0;
};

/// Loads every workload referenced by the spec from <experiment>/workloads.
std::map<std::string, schema::LoadedWorkload> load_workloads(const schema::TestSpec& spec,
                                                             const std::filesystem::path& experiment);

/// Runs every expanded trial not already present in `results` and appends
/// one record per trial.
ExperimentOutcome run_experiment(const schema::TestSpec& spec, const std::filesystem::path& results,
                                 const DriverOptions& opts);

}  // namespace pbtbench::driver
