#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "pbtbench/analysis/analysis.hpp"
#include "pbtbench/harness/rng.hpp"

using namespace pbtbench;
using namespace pbtbench::analysis;
using driver::RawRecord;
using driver::TrialResult;
using driver::TrialStatus;

namespace {

double u_of(const std::vector<double>& a, const std::vector<double>& b) {
  double u = 0;
  for (double x : a)
    for (double y : b) u += x < y ? 1 : x == y ? 0.5 : 0;
  return u;
}

// Two-sided permutation p-value by listing every relabelling of the pool.
double brute_p(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pool = a;
  pool.insert(pool.end(), b.begin(), b.end());
  const double u = u_of(a, b);
  const std::size_t n = pool.size();
  long le = 0, ge = 0, total = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != a.size()) continue;
    std::vector<double> x, y;
    for (std::size_t i = 0; i < n; ++i) (mask >> i & 1 ? x : y).push_back(pool[i]);
    const double v = u_of(x, y);
    le += v <= u + 1e-9;
    ge += v >= u - 1e-9;
    ++total;
  }
  return std::min(1.0, 2.0 * std::min(le, ge) / total);
}

TrialResult trial(TrialStatus s, double time, std::uint64_t tests = 10) {
  TrialResult r;
  r.status = s;
  r.time_s = time;
  r.tests = tests;
  if (s == TrialStatus::Found) r.counterexample = "x";
  return r;
}

RawRecord record(const std::string& mutant, const std::string& strategy, TrialResult r) {
  RawRecord rec;
  rec.request.task = {"w", "P", mutant};
  rec.request.strategy.name = strategy;
  rec.result = std::move(r);
  return rec;
}

}  // namespace

TEST(MannWhitney, SeparatedSamples) {
  const auto r = mann_whitney_u({1, 2, 3}, {4, 5, 6});
  EXPECT_EQ(r.method, Method::Exact);
  EXPECT_DOUBLE_EQ(r.u, 9);
  // One of C(6,3) = 20 labellings is this extreme; two-sided doubles it.
  EXPECT_NEAR(r.p_value, 0.1, 1e-12);
  EXPECT_NEAR(mann_whitney_u({4, 5, 6}, {1, 2, 3}).p_value, 0.1, 1e-12);
  EXPECT_DOUBLE_EQ(mann_whitney_u({4, 5, 6}, {1, 2, 3}).u, 0);
}

TEST(MannWhitney, AllTiedIsOne) {
  EXPECT_DOUBLE_EQ(mann_whitney_u({1, 1, 1}, {1, 1}).p_value, 1.0);
  EXPECT_DOUBLE_EQ(mann_whitney_u_normal(std::vector<double>(10, 2), std::vector<double>(10, 2)).p_value, 1.0);
}

TEST(MannWhitney, NormalApproximationKnownValue) {
  // a = 1..10, b = 11..20: U = 100, mean 50, sd sqrt(10*10*21/12) = 13.2288;
  // z = (100 - 50 - 0.5) / 13.2288 = 3.7418, p = erfc(z / sqrt 2) = 1.827e-4.
  std::vector<double> a, b;
  for (int i = 1; i <= 10; ++i) {
    a.push_back(i);
    b.push_back(i + 10);
  }
  const auto r = mann_whitney_u(a, b);
  EXPECT_EQ(r.method, Method::NormalApprox);
  EXPECT_DOUBLE_EQ(r.u, 100);
  EXPECT_NEAR(r.p_value, std::erfc(49.5 / std::sqrt(175.0) / std::sqrt(2.0)), 1e-12);
  EXPECT_NEAR(r.p_value, 1.827e-4, 1e-6);
}

TEST(MannWhitney, EmptySampleThrows) {
  EXPECT_THROW(mann_whitney_u({}, {1}), std::invalid_argument);
}

TEST(MannWhitneyProperty, ExactMatchesEnumeration) {
  harness::Rng rng(8);
  for (int i = 0; i < 400; ++i) {
    const int na = rng.uniform(1, 6), nb = rng.uniform(1, 12 - na);
    // Few distinct values so ties are common.
    const int levels = rng.uniform(2, 12);
    std::vector<double> a, b;
    for (int k = 0; k < na; ++k) a.push_back(rng.uniform(0, levels));
    for (int k = 0; k < nb; ++k) b.push_back(rng.uniform(0, levels));
    const auto r = mann_whitney_u(a, b);
    ASSERT_EQ(r.method, Method::Exact);
    ASSERT_NEAR(r.p_value, brute_p(a, b), 1e-9) << i;
    ASSERT_DOUBLE_EQ(r.u, u_of(a, b));
  }
}

TEST(MannWhitneyProperty, SymmetricInArguments) {
  harness::Rng rng(21);
  for (int i = 0; i < 300; ++i) {
    std::vector<double> a, b;
    for (int k = rng.uniform(1, 15); k > 0; --k) a.push_back(rng.uniform(0, 20) / 4.0);
    for (int k = rng.uniform(1, 15); k > 0; --k) b.push_back(rng.uniform(0, 20) / 4.0);
    const auto ab = mann_whitney_u(a, b), ba = mann_whitney_u(b, a);
    ASSERT_DOUBLE_EQ(ab.u + ba.u, static_cast<double>(a.size() * b.size()));
    ASSERT_NEAR(ab.p_value, ba.p_value, 1e-12);
    ASSERT_GT(ab.p_value, 0);
    ASSERT_LE(ab.p_value, 1);
  }
}

TEST(Buckets, Labels) {
  const BucketScheme s;
  EXPECT_EQ(s.bucket_count(), 5u);
  EXPECT_EQ(s.label(0), "≤0.1s");
  EXPECT_EQ(s.label(3), "≤60s");
  EXPECT_EQ(s.label(4), "Unsolved");
  EXPECT_EQ(BucketScheme::for_timeout(60).thresholds, s.thresholds);
  EXPECT_EQ(BucketScheme::for_timeout(2).thresholds, (std::vector<double>{0.1, 1, 2}));
  EXPECT_EQ(BucketScheme::for_timeout(0.05).thresholds, std::vector<double>{0.05});
  EXPECT_THROW((BucketScheme{{1, 1}}.validate()), std::invalid_argument);
  EXPECT_THROW((BucketScheme{{0}}.validate()), std::invalid_argument);
  EXPECT_THROW((BucketScheme{{}}.validate()), std::invalid_argument);
}

TEST(Buckets, BoundariesAreInclusive) {
  const BucketScheme s;
  const SolveStatus solved{Solve::Solved, 3, 3};
  EXPECT_EQ(bucket(solved, 0.1, s, false), "≤0.1s");
  EXPECT_EQ(bucket(solved, 0.1000001, s, false), "≤1s");
  EXPECT_EQ(bucket(solved, 60, s, false), "≤60s");
  EXPECT_EQ(bucket(solved, 75, s, false), "≤60s");
  const SolveStatus partial{Solve::Partial, 1, 3};
  EXPECT_EQ(bucket(partial, 0.01, s, false), "Unsolved");
  EXPECT_EQ(bucket(partial, 0.01, s, true), "≤0.1s");
  EXPECT_EQ(bucket({Solve::Unsolved, 0, 3}, std::nullopt, s, true), "Unsolved");
}

TEST(BucketsProperty, EveryTaskInExactlyOneBucket) {
  harness::Rng rng(4);
  const BucketScheme s;
  for (int i = 0; i < 5000; ++i) {
    std::vector<TrialResult> ts;
    for (int k = rng.uniform(1, 6); k > 0; --k) {
      const auto st = static_cast<TrialStatus>(rng.uniform(0, 3));
      ts.push_back(trial(st, rng.uniform(0, 9000) / 100.0));
    }
    const auto status = solve_status(ts);
    ASSERT_EQ(status.total, ts.size());
    std::optional<double> mean;
    if (status.found) {
      double sum = 0;
      for (const auto& t : ts) sum += t.status == TrialStatus::Found ? t.time_s : 0;
      mean = sum / status.found;
    }
    const auto idx = bucket_index(status, mean, s, false);
    ASSERT_LT(idx, s.bucket_count());
    ASSERT_EQ(idx == s.bucket_count() - 1, status.status != Solve::Solved);
    if (idx > 0 && idx < s.bucket_count() - 1) {
      ASSERT_GT(*mean, s.thresholds[idx - 1]);
    }
  }
}

TEST(Summary, StatusesMeansAndComparisons) {
  std::vector<RawRecord> recs;
  // m1: fast is clearly faster than slow; both solve it.
  for (int i = 0; i < 6; ++i) {
    recs.push_back(record("m1", "fast", trial(TrialStatus::Found, 0.01 * (i + 1), 10 + i)));
    recs.push_back(record("m1", "slow", trial(TrialStatus::Found, 5 + i, 1000 + i)));
  }
  // m2: slow times out once.
  for (int i = 0; i < 6; ++i) {
    recs.push_back(record("m2", "fast", trial(TrialStatus::Found, 0.5, 20)));
    recs.push_back(record("m2", "slow", trial(i == 0 ? TrialStatus::Timeout : TrialStatus::Found, 2, 50)));
  }
  AnalysisConfig cfg;
  const auto a = summarize(recs, cfg);
  ASSERT_EQ(a.summaries.size(), 4u);
  EXPECT_EQ(a.summaries[0].task.mutant, "m1");
  EXPECT_EQ(a.summaries[0].strategy, "fast");
  EXPECT_NEAR(*a.summaries[0].mean_time, 0.035, 1e-12);
  EXPECT_EQ(a.summaries[0].bucket, "≤0.1s");
  EXPECT_EQ(a.summaries[1].bucket, "≤10s");
  EXPECT_EQ(a.summaries[3].status.status, Solve::Partial);
  EXPECT_EQ(a.summaries[3].bucket, "Unsolved");
  // The mean covers found trials only.
  EXPECT_DOUBLE_EQ(*a.summaries[3].mean_time, 2);

  ASSERT_EQ(a.comparisons.size(), 1u);
  const auto& c = a.comparisons[0];
  EXPECT_EQ(c.a, "fast");
  EXPECT_EQ(c.common_solved, 1u);
  EXPECT_EQ(c.time_a_lower, 1u);
  EXPECT_EQ(c.time_b_lower, 0u);
  EXPECT_EQ(c.tests_a_lower, 1u);

  ASSERT_EQ(a.throughput.size(), 2u);
  EXPECT_NEAR(*a.throughput[0].tests_per_second, (10 + 11 + 12 + 13 + 14 + 15) / 0.21, 1e-9);

  const auto counts = bucket_counts(a, cfg.scheme);
  ASSERT_EQ(counts.size(), 2u);
  EXPECT_EQ(counts[1].strategy, "slow");
  EXPECT_EQ(counts[1].counts, (std::vector<std::size_t>{0, 0, 1, 0, 1}));

  AnalysisConfig partial = cfg;
  partial.partial = true;
  EXPECT_EQ(summarize(recs, partial).summaries[3].bucket, "≤10s");

  const auto j = summary_json(a, cfg);
  EXPECT_EQ(j["tasks"].size(), 4u);
  EXPECT_EQ(j["tasks"][3]["status"], "Partial");
  EXPECT_EQ(comparisons_json(a, cfg)["comparisons"][0]["tasks"][0]["time"]["method"], "exact");
}

TEST(Summary, RejectsBadInput) {
  EXPECT_TRUE(summarize({}, AnalysisConfig{}).summaries.empty());
  EXPECT_THROW(solve_status({}), EmptyInput);
  AnalysisConfig bad;
  bad.alpha = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}
