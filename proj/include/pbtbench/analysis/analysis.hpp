#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pbtbench/driver/driver.hpp"

namespace pbtbench::analysis {

class EmptyInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Solve { Solved, Partial, Unsolved };

std::string_view to_string(Solve s) noexcept;

struct SolveStatus {
  Solve status = Solve::Unsolved;
  std::size_t found = 0;
  std::size_t total = 0;
};

/// Errors and timeouts count as not found.
SolveStatus solve_status(const std::vector<driver::TrialResult>& trials);

struct BucketScheme {
  std::vector<double> thresholds{0.1, 1, 10, 60};

  /// Throws std::invalid_argument unless strictly ascending and positive.
  void validate() const;
  std::size_t bucket_count() const noexcept { return thresholds.size() + 1; }
  /// "≤0.1s", ..., and "Unsolved" for the last index.
  std::string label(std::size_t index) const;

  /// The default cut points below `timeout_s`, closed by the timeout itself.
  static BucketScheme for_timeout(double timeout_s);
};

/// Index into the scheme's buckets; the last index is Unsolved. In default
/// mode only Solved tasks get a time bucket; in partial mode any task with a
/// found trial does. A Solved task slower than the last cut point lands in
/// the last time bucket.
std::size_t bucket_index(const SolveStatus& status, std::optional<double> mean_time, const BucketScheme& scheme,
                         bool partial_mode);

std::string bucket(const SolveStatus& status, std::optional<double> mean_time, const BucketScheme& scheme,
                   bool partial_mode);

enum class Method { Exact, NormalApprox };

std::string_view to_string(Method m) noexcept;

struct MannWhitneyResult {
  double u = 0;  // pairs (x in a, y in b) with x < y, ties counting 1/2
  double p_value = 1;
  Method method = Method::Exact;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
};

/// Samples with n_a + n_b at or below this use the exact null distribution.
inline constexpr std::size_t kExactLimit = 12;

/// Two-sided test. Exact: p = min(1, 2 min(P(U <= u), P(U >= u))) under
/// random relabelling of the pooled sample. Otherwise the normal
/// approximation with tie and continuity corrections.
MannWhitneyResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b);

/// The normal approximation regardless of sample size.
MannWhitneyResult mann_whitney_u_normal(const std::vector<double>& a, const std::vector<double>& b);

struct AnalysisConfig {
  double alpha = 0.05;
  BucketScheme scheme;
  bool partial = false;

  void validate() const;
};

struct TaskSummary {
  schema::Task task;
  std::string strategy;
  SolveStatus status;
  std::optional<double> mean_time;
  std::optional<double> mean_tests;
  std::optional<double> mean_discards;
  std::size_t bucket_index = 0;
  std::string bucket;
  std::vector<double> found_times;
  std::vector<double> found_tests;
};

struct TaskComparison {
  schema::Task task;
  MannWhitneyResult time;   // a's times against b's
  MannWhitneyResult tests;  // a's test counts against b's
};

/// Strategy a against strategy b over the tasks both solve.
struct Comparison {
  std::string a;
  std::string b;
  std::size_t common_solved = 0;
  std::size_t time_a_lower = 0;
  std::size_t time_b_lower = 0;
  std::size_t tests_a_lower = 0;
  std::size_t tests_b_lower = 0;
  std::vector<TaskComparison> tasks;
};

struct Throughput {
  std::string strategy;
  double tests = 0;
  double time_s = 0;
  std::optional<double> tests_per_second;
};

struct Analysis {
  std::vector<TaskSummary> summaries;  // sorted by (workload, task id, strategy)
  std::vector<Comparison> comparisons;
  /// Over the tasks every strategy solved.
  std::vector<Throughput> throughput;
};

Analysis summarize(const std::vector<driver::RawRecord>& records, const AnalysisConfig& cfg);

nlohmann::ordered_json summary_json(const Analysis& a, const AnalysisConfig& cfg);
nlohmann::ordered_json comparisons_json(const Analysis& a, const AnalysisConfig& cfg);

/// Bucket counts per strategy and workload, as read back from summary.json.
struct BucketCounts {
  std::string workload;
  std::string strategy;
  std::vector<std::size_t> counts;  // one per bucket, Unsolved last
};

std::vector<BucketCounts> bucket_counts(const Analysis& a, const BucketScheme& scheme);

}  // namespace pbtbench::analysis
