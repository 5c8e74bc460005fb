#include "pbtbench/analysis/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace pbtbench::analysis {

using driver::TrialStatus;
using nlohmann::ordered_json;

std::string_view to_string(Solve s) noexcept {
  switch (s) {
    case Solve::Solved: return "Solved";
    case Solve::Partial: return "Partial";
    case Solve::Unsolved: return "Unsolved";
  }
  return "?";
}

std::string_view to_string(Method m) noexcept { return m == Method::Exact ? "exact" : "normal-approx"; }

SolveStatus solve_status(const std::vector<driver::TrialResult>& trials) {
  if (trials.empty()) throw EmptyInput("solve_status needs at least one trial");
  SolveStatus s;
  s.total = trials.size();
  s.found = static_cast<std::size_t>(std::count_if(
      trials.begin(), trials.end(), [](const driver::TrialResult& t) { return t.status == TrialStatus::Found; }));
  s.status = s.found == s.total ? Solve::Solved : s.found == 0 ? Solve::Unsolved : Solve::Partial;
  return s;
}

namespace {

std::string number(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc() ? end : buf);
}

double mean(const std::vector<double>& xs) { return std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size(); }

}  // namespace

void BucketScheme::validate() const {
  if (thresholds.empty()) throw std::invalid_argument("bucket scheme needs at least one threshold");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0)) throw std::invalid_argument("bucket thresholds must be positive");
    if (i > 0 && !(thresholds[i] > thresholds[i - 1])) {
      throw std::invalid_argument("bucket thresholds must be strictly ascending");
    }
  }
}

std::string BucketScheme::label(std::size_t index) const {
  if (index >= thresholds.size()) return "Unsolved";
  return "≤" + number(thresholds[index]) + "s";
}

BucketScheme BucketScheme::for_timeout(double timeout_s) {
  BucketScheme s;
  std::vector<double> cut;
  for (double t : s.thresholds) {
    if (t < timeout_s) cut.push_back(t);
  }
  cut.push_back(timeout_s);
  s.thresholds = cut;
  return s;
}

std::size_t bucket_index(const SolveStatus& status, std::optional<double> mean_time, const BucketScheme& scheme,
                         bool partial_mode) {
  const std::size_t unsolved = scheme.thresholds.size();
  const bool timed = partial_mode ? status.found > 0 : status.status == Solve::Solved;
  if (!timed || !mean_time) return unsolved;
  for (std::size_t i = 0; i < scheme.thresholds.size(); ++i) {
    if (*mean_time <= scheme.thresholds[i]) return i;
  }
  return unsolved - 1;
}

std::string bucket(const SolveStatus& status, std::optional<double> mean_time, const BucketScheme& scheme,
                   bool partial_mode) {
  return scheme.label(bucket_index(status, mean_time, scheme, partial_mode));
}

namespace {

// Twice U, so that half-counted ties stay integral.
long long twice_u(const std::vector<double>& a, const std::vector<double>& b) {
  long long u2 = 0;
  for (double x : a) {
    for (double y : b) u2 += x < y ? 2 : x == y ? 1 : 0;
  }
  return u2;
}

bool has_ties(std::vector<double> pooled) {
  std::sort(pooled.begin(), pooled.end());
  return std::adjacent_find(pooled.begin(), pooled.end()) != pooled.end();
}

// Null distribution of 2U: counts[k] = number of labellings with 2U == k.
std::vector<double> null_counts(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t m = a.size(), n = b.size();
  std::vector<double> counts(2 * m * n + 1, 0.0);
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());

  if (!has_ties(pooled)) {
    // Without ties U only depends on ranks: f(i, j, u) = f(i-1, j, u-j) + f(i, j-1, u)
    // counts arrangements of i a-items and j b-items with u inversions.
    std::vector<std::vector<std::vector<double>>> f(
        m + 1, std::vector<std::vector<double>>(n + 1, std::vector<double>(m * n + 1, 0.0)));
    for (std::size_t i = 0; i <= m; ++i) {
      for (std::size_t j = 0; j <= n; ++j) {
        if (i == 0 || j == 0) {
          f[i][j][0] = 1;
          continue;
        }
        for (std::size_t u = 0; u <= i * j; ++u) {
          double c = f[i][j - 1][u];
          if (u >= j) c += f[i - 1][j][u - j];
          f[i][j][u] = c;
        }
      }
    }
    for (std::size_t u = 0; u <= m * n; ++u) counts[2 * u] = f[m][n][u];
    return counts;
  }

  // With ties, enumerate which pooled positions form sample a.
  const std::size_t total = m + n;
  std::vector<bool> pick(total, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(m), true);
  std::vector<double> xa, xb;
  do {
    xa.clear();
    xb.clear();
    for (std::size_t i = 0; i < total; ++i) (pick[i] ? xa : xb).push_back(pooled[i]);
    counts[static_cast<std::size_t>(twice_u(xa, xb))] += 1;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return counts;
}

void check_inputs(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw EmptyInput("mann_whitney_u needs two non-empty samples");
}

}  // namespace

MannWhitneyResult mann_whitney_u_normal(const std::vector<double>& a, const std::vector<double>& b) {
  check_inputs(a, b);
  MannWhitneyResult r;
  r.n_a = a.size();
  r.n_b = b.size();
  r.method = Method::NormalApprox;
  r.u = twice_u(a, b) / 2.0;

  const double m = static_cast<double>(r.n_a), n = static_cast<double>(r.n_b), N = m + n;
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  double tie_term = 0;
  for (std::size_t i = 0; i < pooled.size();) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j] == pooled[i]) ++j;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  const double var = N > 1 ? m * n / 12.0 * ((N + 1) - tie_term / (N * (N - 1))) : 0;
  if (var <= 0) {
    r.p_value = 1;
    return r;
  }
  const double z = std::max(0.0, std::abs(r.u - m * n / 2) - 0.5) / std::sqrt(var);
  r.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return r;
}

MannWhitneyResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b) {
  check_inputs(a, b);
  if (a.size() + b.size() > kExactLimit) return mann_whitney_u_normal(a, b);

  MannWhitneyResult r;
  r.n_a = a.size();
  r.n_b = b.size();
  r.method = Method::Exact;
  const long long u2 = twice_u(a, b);
  r.u = u2 / 2.0;
  const auto counts = null_counts(a, b);
  double total = 0, lower = 0, upper = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    total += counts[k];
    if (static_cast<long long>(k) <= u2) lower += counts[k];
    if (static_cast<long long>(k) >= u2) upper += counts[k];
  }
  r.p_value = std::min(1.0, 2 * std::min(lower, upper) / total);
  return r;
}

void AnalysisConfig::validate() const {
  if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("alpha must lie strictly between 0 and 1");
  scheme.validate();
}

Analysis summarize(const std::vector<driver::RawRecord>& records, const AnalysisConfig& cfg) {
  cfg.validate();
  using Key = std::pair<schema::Task, std::string>;
  std::map<Key, std::vector<driver::TrialResult>> groups;
  for (const auto& rec : records) groups[{rec.request.task, rec.request.strategy.name}].push_back(rec.result);

  Analysis out;
  for (const auto& [key, trials] : groups) {
    TaskSummary s;
    s.task = key.first;
    s.strategy = key.second;
    s.status = solve_status(trials);
    std::vector<double> discards;
    for (const auto& t : trials) {
      if (t.status != TrialStatus::Found) continue;
      s.found_times.push_back(t.time_s);
      s.found_tests.push_back(static_cast<double>(t.tests));
      discards.push_back(static_cast<double>(t.discards));
    }
    if (!s.found_times.empty()) {
      s.mean_time = mean(s.found_times);
      s.mean_tests = mean(s.found_tests);
      s.mean_discards = mean(discards);
    }
    s.bucket_index = bucket_index(s.status, s.mean_time, cfg.scheme, cfg.partial);
    s.bucket = cfg.scheme.label(s.bucket_index);
    out.summaries.push_back(std::move(s));
  }
  std::sort(out.summaries.begin(), out.summaries.end(), [](const TaskSummary& x, const TaskSummary& y) {
    return std::tie(x.task.workload, x.task, x.strategy) < std::tie(y.task.workload, y.task, y.strategy);
  });

  std::set<std::string> strategies;
  std::set<schema::Task> tasks;
  std::map<Key, const TaskSummary*> index;
  for (const auto& s : out.summaries) {
    strategies.insert(s.strategy);
    tasks.insert(s.task);
    index[{s.task, s.strategy}] = &s;
  }
  auto solved = [&](const schema::Task& t, const std::string& st) -> const TaskSummary* {
    const auto it = index.find({t, st});
    return it != index.end() && it->second->status.status == Solve::Solved ? it->second : nullptr;
  };

  const std::vector<std::string> names(strategies.begin(), strategies.end());
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      Comparison c;
      c.a = names[i];
      c.b = names[j];
      for (const auto& t : tasks) {
        const auto* sa = solved(t, c.a);
        const auto* sb = solved(t, c.b);
        if (!sa || !sb) continue;
        ++c.common_solved;
        TaskComparison tc{t, mann_whitney_u(sa->found_times, sb->found_times),
                          mann_whitney_u(sa->found_tests, sb->found_tests)};
        // Large U means a's values tend to sit below b's.
        auto tally = [&](const MannWhitneyResult& r, std::size_t& a_lower, std::size_t& b_lower) {
          if (r.p_value >= cfg.alpha) return;
          const double mid = static_cast<double>(r.n_a * r.n_b) / 2;
          if (r.u > mid) ++a_lower;
          if (r.u < mid) ++b_lower;
        };
        tally(tc.time, c.time_a_lower, c.time_b_lower);
        tally(tc.tests, c.tests_a_lower, c.tests_b_lower);
        c.tasks.push_back(std::move(tc));
      }
      out.comparisons.push_back(std::move(c));
    }
  }

  std::vector<schema::Task> common;
  for (const auto& t : tasks) {
    if (std::all_of(names.begin(), names.end(), [&](const std::string& st) { return solved(t, st) != nullptr; })) {
      common.push_back(t);
    }
  }
  for (const auto& st : names) {
    Throughput tp;
    tp.strategy = st;
    for (const auto& t : common) {
      const auto* s = solved(t, st);
      tp.tests += std::accumulate(s->found_tests.begin(), s->found_tests.end(), 0.0);
      tp.time_s += std::accumulate(s->found_times.begin(), s->found_times.end(), 0.0);
    }
    if (tp.time_s > 0) tp.tests_per_second = tp.tests / tp.time_s;
    out.throughput.push_back(tp);
  }
  return out;
}

namespace {

ordered_json opt(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json scheme_json(const AnalysisConfig& cfg) {
  ordered_json labels = ordered_json::array();
  for (std::size_t i = 0; i < cfg.scheme.bucket_count(); ++i) labels.push_back(cfg.scheme.label(i));
  return {{"thresholds", cfg.scheme.thresholds}, {"labels", labels}, {"partial", cfg.partial}};
}

ordered_json mw_json(const MannWhitneyResult& r) {
  return {{"u", r.u}, {"p_value", r.p_value}, {"method", to_string(r.method)}, {"n_a", r.n_a}, {"n_b", r.n_b}};
}

}  // namespace

std::vector<BucketCounts> bucket_counts(const Analysis& a, const BucketScheme& scheme) {
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> counts;
  for (const auto& s : a.summaries) {
    auto& c = counts[{s.task.workload, s.strategy}];
    if (c.empty()) c.assign(scheme.bucket_count(), 0);
    ++c[s.bucket_index];
  }
  std::vector<BucketCounts> out;
  for (auto& [key, c] : counts) out.push_back({key.first, key.second, std::move(c)});
  return out;
}

ordered_json summary_json(const Analysis& a, const AnalysisConfig& cfg) {
  ordered_json tasks = ordered_json::array();
  for (const auto& s : a.summaries) {
    tasks.push_back({{"task", s.task.id()},
                     {"workload", s.task.workload},
                     {"property", s.task.property},
                     {"mutant", s.task.mutant},
                     {"strategy", s.strategy},
                     {"status", to_string(s.status.status)},
                     {"found_trials", s.status.found},
                     {"total_trials", s.status.total},
                     {"mean_time_s", opt(s.mean_time)},
                     {"mean_tests", opt(s.mean_tests)},
                     {"mean_discards", opt(s.mean_discards)},
                     {"bucket", s.bucket},
                     {"bucket_index", s.bucket_index}});
  }
  ordered_json buckets = ordered_json::array();
  for (const auto& b : bucket_counts(a, cfg.scheme)) {
    buckets.push_back({{"workload", b.workload}, {"strategy", b.strategy}, {"counts", b.counts}});
  }
  ordered_json tp = ordered_json::array();
  for (const auto& t : a.throughput) {
    tp.push_back({{"strategy", t.strategy}, {"tests", t.tests}, {"time_s", t.time_s},
                  {"tests_per_second", opt(t.tests_per_second)}});
  }
  return {{"alpha", cfg.alpha}, {"scheme", scheme_json(cfg)}, {"tasks", tasks}, {"buckets", buckets},
          {"throughput", tp}};
}

ordered_json comparisons_json(const Analysis& a, const AnalysisConfig& cfg) {
  ordered_json out = ordered_json::array();
  for (const auto& c : a.comparisons) {
    ordered_json tasks = ordered_json::array();
    for (const auto& t : c.tasks) {
      tasks.push_back({{"task", t.task.id()}, {"time", mw_json(t.time)}, {"tests", mw_json(t.tests)}});
    }
    out.push_back({{"a", c.a},
                   {"b", c.b},
                   {"common_solved", c.common_solved},
                   {"time_a_lower", c.time_a_lower},
                   {"time_b_lower", c.time_b_lower},
                   {"tests_a_lower", c.tests_a_lower},
                   {"tests_b_lower", c.tests_b_lower},
                   {"tasks", tasks}});
  }
  return {{"alpha", cfg.alpha}, {"comparisons", out}};
}

}  // namespace pbtbench::analysis
