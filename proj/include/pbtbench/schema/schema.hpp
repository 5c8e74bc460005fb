#pragma once

// Experiment data model: workload adapters (workloads/<name>/config.json),
// test specifications (tests/<name>.json) and their expansion into runs.
//
// workload config
//   name            identifier                              required
//   language        identifier                              required
//   comment_styles  {".ext": {begin, end, marker?}}         required
//   source_roots    [path relative to the workload dir]     required
//   properties      [identifier]                            required
//   strategies      [{name, kind, args?}]                   required
//                   kind: "bespoke" | "type-based" | "external"
//   tasks           [{property, mutant}]                    optional; absent = full cross product
//   build           command template                        required
//   run             command template                        required
//
// test spec
//   name            text                                    required
//   entries         [{workload, strategies?, tasks?, trials?, timeout_s?,
//                     max_tests?, max_discards?}]           required, non-empty
//   strategies defaults to ["*"], tasks to [{"property": "*", "mutant": "*"}],
//   trials to 10, timeout_s to 60, max_tests to 1000000, max_discards to 10x max_tests.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pbtbench/mutation/mutation.hpp"

namespace pbtbench::schema {

enum class IssueKind { MissingField, InvalidValue, UnknownPlaceholder, DuplicateName, UnknownReference, EmptyExpansion };

std::string_view to_string(IssueKind k) noexcept;

struct Issue {
  IssueKind kind;
  std::string path;  // JSON-pointer-like location, e.g. "/strategies/1/name"
  std::string message;
};

class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string context, std::vector<Issue> issues);

  const std::vector<Issue>& issues() const noexcept { return issues_; }
  bool has(IssueKind k) const noexcept;

 private:
  std::vector<Issue> issues_;
};

enum class StrategyKind { Bespoke, TypeBased, External };

std::string_view to_string(StrategyKind k) noexcept;

struct StrategySpec {
  std::string name;
  StrategyKind kind = StrategyKind::External;
  std::vector<std::string> args;

  friend bool operator==(const StrategySpec&, const StrategySpec&) = default;
};

struct TaskRef {
  std::string property;
  std::string mutant;

  friend bool operator==(const TaskRef&, const TaskRef&) = default;
};

struct WorkloadConfig {
  std::string name;
  std::string language;
  std::map<std::string, mutation::CommentStyle> comment_styles;
  std::vector<std::string> source_roots;
  std::vector<std::string> properties;
  std::vector<StrategySpec> strategies;
  std::optional<std::vector<TaskRef>> tasks;
  std::string build;
  std::string run;

  friend bool operator==(const WorkloadConfig& a, const WorkloadConfig& b);
};

/// Placeholders accepted in the two command templates.
const std::vector<std::string>& build_placeholders();
const std::vector<std::string>& run_placeholders();

WorkloadConfig parse_workload_config(const nlohmann::json& doc);
WorkloadConfig load_workload_config(const std::filesystem::path& path);
nlohmann::json to_json(const WorkloadConfig& c);

struct TaskFilter {
  std::string property = "*";
  std::string mutant = "*";

  friend bool operator==(const TaskFilter&, const TaskFilter&) = default;
};

struct TestEntry {
  std::string workload;
  std::vector<std::string> strategies{"*"};
  std::vector<TaskFilter> tasks{TaskFilter{}};
  int trials = 10;
  double timeout_s = 60;
  std::uint64_t max_tests = 1'000'000;
  std::optional<std::uint64_t> max_discards;

  std::uint64_t discard_limit() const noexcept { return max_discards.value_or(max_tests * 10); }

  friend bool operator==(const TestEntry&, const TestEntry&) = default;
};

struct TestSpec {
  std::string name;
  std::vector<TestEntry> entries;

  friend bool operator==(const TestSpec&, const TestSpec&) = default;
};

TestSpec parse_test_spec(const nlohmann::json& doc);
TestSpec load_test_spec(const std::filesystem::path& path);
nlohmann::json to_json(const TestSpec& s);

struct Task {
  std::string workload;
  std::string property;
  std::string mutant;

  /// "workload/property/mutant"
  std::string id() const;

  friend auto operator<=>(const Task&, const Task&) = default;
};

/// A workload config together with where it lives and the mutants its
/// sources declare.
struct LoadedWorkload {
  WorkloadConfig config;
  std::filesystem::path dir;
  std::vector<mutation::MutantRef> mutants;  // relative to dir
};

/// Loads `dir/config.json`, enumerates mutants in the source roots and checks
/// that the manifest names existing properties and mutants.
LoadedWorkload load_workload(const std::filesystem::path& dir);

/// Tasks of a workload: the manifest, or the full property x mutant product
/// when no manifest is given. Sorted by id.
std::vector<Task> workload_tasks(const LoadedWorkload& wl);

struct Run {
  Task task;
  StrategySpec strategy;
  int trials = 10;
  double timeout_s = 60;
  std::uint64_t max_tests = 1'000'000;
  std::uint64_t max_discards = 10'000'000;
};

/// Cartesian product of matched tasks and strategies per entry, ordered by
/// entry, then task id, then strategy name. Throws SchemaError
/// (EmptyExpansion / UnknownReference).
std::vector<Run> expand_tasks(const TestSpec& spec, const std::map<std::string, LoadedWorkload>& workloads);

/// The test spec `workload add` writes: every task, every strategy,
/// time-bounded trials.
TestSpec default_test_spec(const WorkloadConfig& c);

}  // namespace pbtbench::schema
