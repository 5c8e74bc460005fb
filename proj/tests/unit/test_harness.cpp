#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <thread>

#include "pbtbench/crosslang/codec.hpp"
#include "pbtbench/harness/runner.hpp"
#include "pbtbench/workloads/variants.hpp"

using namespace pbtbench;
using namespace pbtbench::harness;
using driver::TrialStatus;
using workloads::ArgKind;
using workloads::Verdict;

namespace {

void collect_keys(const bst::Tree& t, std::vector<int>& keys, std::vector<int>& values) {
  if (t.empty()) return;
  keys.push_back(t->key);
  values.push_back(t->value);
  collect_keys(t->left, keys, values);
  collect_keys(t->right, keys, values);
}

}  // namespace

TEST(Rng, SplitIgnoresParentConsumption) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) b.next();
  EXPECT_EQ(a.split(7).next(), b.split(7).next());
  EXPECT_NE(a.split(7).next(), a.split(8).next());
  EXPECT_EQ(Rng(1).next(), Rng(1).next());
}

TEST(Rng, BelowIsUniform) {
  // Chi-square over 7 cells, 70k draws; 6 degrees of freedom, 0.999 quantile 22.46.
  Rng rng(3);
  std::vector<int> cells(7, 0);
  for (int i = 0; i < 70000; ++i) ++cells[rng.below(7)];
  double chi = 0;
  for (int c : cells) chi += (c - 10000.0) * (c - 10000.0) / 10000.0;
  EXPECT_LT(chi, 22.46);
  for (int i = 0; i < 1000; ++i) {
    const int v = rng.uniform(-3, 3);
    EXPECT_GE(v, -3);
    EXPECT_LE(v, 3);
  }
  EXPECT_EQ(rng.below(1), 0u);
}

TEST(Generators, BespokeAlwaysValid) {
  Rng root(17);
  GenConfig cfg;
  std::set<int> seen_keys;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    cfg.size = static_cast<int>(i % 11);
    auto rng = root.split(i);
    const auto t = gen_bst_bespoke(rng, cfg);
    ASSERT_TRUE(bst::is_bst(t));
    ASSERT_LE(bst::size(t), static_cast<std::size_t>(cfg.size));
    std::vector<int> keys, values;
    collect_keys(t, keys, values);
    for (int k : keys) {
      ASSERT_GE(k, 1);
      ASSERT_LE(k, 2 * cfg.size);
      if (cfg.size == 10) seen_keys.insert(k);
    }
    for (int v : values) ASSERT_TRUE(v >= 0 && v <= kValueMax);
    const auto r = gen_rbt_bespoke(rng, cfg);
    ASSERT_TRUE(rbt::is_rbt(r));
  }
  // Keys cover the whole range 1..2n.
  EXPECT_EQ(seen_keys.size(), 20u);
}

TEST(Generators, TypeBasedShape) {
  GenConfig cfg;
  cfg.size = 0;
  Rng rng(1);
  EXPECT_TRUE(gen_tree_typebased(rng, cfg).empty());
  EXPECT_TRUE(gen_rbt_typebased(rng, cfg).empty());
  cfg.size = 4;
  for (int i = 0; i < 2000; ++i) EXPECT_LE(bst::depth(gen_tree_typebased(rng, cfg)), 4u);
}

TEST(Generators, PinnedValidityFractions) {
  // Seed 2024, size 10, 10,000 samples: the type-based generator produces a
  // valid search tree 6603 times and a valid red-black tree 6263 times.
  GenConfig cfg;
  Rng root(2024);
  int b = 0, r = 0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    auto rng = root.split(i);
    b += bst::is_bst(gen_tree_typebased(rng, cfg));
    auto rng2 = root.split(i).split(1);
    r += rbt::is_rbt(gen_rbt_typebased(rng2, cfg));
  }
  EXPECT_EQ(b, 6603);
  EXPECT_EQ(r, 6263);
}

TEST(Generators, InputsIndependentOfOrder) {
  const auto gen = make_generator(StrategyKind::TypeBased, {ArgKind::BstTree, ArgKind::Key, ArgKind::Value});
  const Rng root(5);
  const GenConfig cfg;
  const auto late = gen(root, 50, cfg);
  for (std::uint64_t i = 0; i < 50; ++i) gen(root, i, cfg);
  EXPECT_EQ(gen(root, 50, cfg), late);
}

TEST(Generators, RampCyclesSize) {
  GenConfig cfg;
  cfg.size = 3;
  cfg.ramp = true;
  const auto gen = make_generator(StrategyKind::Bespoke, {ArgKind::Key});
  const Rng root(9);
  for (std::uint64_t i = 0; i < 400; ++i) {
    const int k = std::get<int>(gen(root, i, cfg)[0]);
    const int size = static_cast<int>(i % 4);
    EXPECT_GE(k, 1);
    EXPECT_LE(k, size > 0 ? 2 * size : 1);
  }
}

TEST(Generators, UnknownStrategy) {
  EXPECT_THROW(parse_strategy("smallcheck"), UnknownStrategy);
  EXPECT_EQ(builtin_strategies().size(), 2u);
  GenConfig bad;
  bad.size = -1;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Runner, CountsAndCounterexample) {
  // Fails on the fifth non-discarded input; every third input is discarded.
  const auto gen = [](const Rng&, std::uint64_t i, const GenConfig&) { return workloads::Input{static_cast<int>(i)}; };
  const workloads::Evaluator prop = [](const workloads::Input& in) {
    const int i = std::get<int>(in[0]);
    if (i % 3 == 2) return Verdict::Discard;
    return i >= 6 ? Verdict::Fail : Verdict::Pass;
  };
  std::vector<Verdict> seen;
  RunConfig cfg;
  const auto r = run_property(
      prop, gen, [](const workloads::Input& in) { return std::to_string(std::get<int>(in[0])); }, cfg,
      [&](std::uint64_t, Verdict v) { seen.push_back(v); });
  EXPECT_EQ(r.status, TrialStatus::Found);
  EXPECT_EQ(r.counterexample, "6");
  EXPECT_EQ(r.tests, 5u);
  EXPECT_EQ(r.discards, 2u);
  EXPECT_EQ(seen.size(), r.tests + r.discards);
  ASSERT_TRUE(r.gen_time_s && r.exec_time_s);
  EXPECT_LE(*r.gen_time_s + *r.exec_time_s, r.time_s + 1e-9);
}

TEST(Runner, BudgetsAndErrors) {
  const auto gen = [](const Rng&, std::uint64_t, const GenConfig&) { return workloads::Input{1}; };
  const auto print = [](const workloads::Input&) { return std::string("x"); };
  RunConfig cfg;
  cfg.gen.max_tests = 100;
  auto r = run_property([](const workloads::Input&) { return Verdict::Pass; }, gen, print, cfg);
  EXPECT_EQ(r.status, TrialStatus::GaveUp);
  EXPECT_EQ(r.tests, 100u);

  cfg.gen.max_discards = 50;
  r = run_property([](const workloads::Input&) { return Verdict::Discard; }, gen, print, cfg);
  EXPECT_EQ(r.status, TrialStatus::GaveUp);
  EXPECT_EQ(r.discards, 50u);
  EXPECT_EQ(r.tests, 0u);

  r = run_property([](const workloads::Input&) -> Verdict { throw std::runtime_error("boom"); }, gen, print, cfg);
  EXPECT_EQ(r.status, TrialStatus::Error);
  EXPECT_EQ(r.message, "boom");
}

TEST(Runner, StopsAtDeadline) {
  const auto gen = [](const Rng&, std::uint64_t, const GenConfig&) { return workloads::Input{1}; };
  RunConfig cfg;
  cfg.gen.max_tests = std::numeric_limits<std::uint64_t>::max();
  cfg.timeout_s = 0.3;
  const auto r = run_property(
      [](const workloads::Input&) {
        std::this_thread::sleep_for(std::chrono::milliseconds(1));
        return Verdict::Pass;
      },
      gen, [](const workloads::Input&) { return std::string(); }, cfg);
  EXPECT_EQ(r.status, TrialStatus::GaveUp);
  EXPECT_GE(r.time_s, 0.3);
  EXPECT_LT(r.time_s, 0.5);
}

TEST(Runner, SameSeedSameRun) {
  const auto wl = workloads::make_builtin("bst", "insert_keep_old_value");
  RunConfig cfg;
  cfg.seed = 77;
  std::vector<Verdict> a, b;
  const auto ra = run_workload(*wl, "InsertPost", "typebased", cfg, [&](std::uint64_t, Verdict v) { a.push_back(v); });
  const auto rb = run_workload(*wl, "InsertPost", "typebased", cfg, [&](std::uint64_t, Verdict v) { b.push_back(v); });
  EXPECT_EQ(ra.status, TrialStatus::Found);
  EXPECT_EQ(a, b);
  EXPECT_EQ(ra.counterexample, rb.counterexample);
  EXPECT_EQ(ra.tests, rb.tests);
  // The counterexample replays as a failure.
  const auto sig = wl->property("InsertPost").signature;
  EXPECT_EQ(wl->evaluate("InsertPost", crosslang::deserialize_input(*ra.counterexample, sig)), Verdict::Fail);
}

TEST(Runner, BespokeNeverDiscards) {
  for (const auto& name : workloads::builtin_workloads()) {
    const auto wl = workloads::make_builtin(name);
    for (const auto& p : wl->properties()) {
      RunConfig cfg;
      cfg.gen.max_tests = 2000;
      const auto r = run_workload(*wl, p.name, "bespoke", cfg);
      EXPECT_EQ(r.discards, 0u) << name << " " << p.name;
      EXPECT_EQ(r.status, TrialStatus::GaveUp);
    }
  }
}

TEST(ChildMain, PrintsProtocolLine) {
  testing::internal::CaptureStdout();
  const char* argv[] = {"child", "--workload", "bst", "--mutant", "insert_flip_comparison", "--property", "InsertValid",
                        "--strategy", "bespoke", "--seed", "3"};
  const int rc = child_main(static_cast<int>(std::size(argv)), argv, [](const std::string& w, const std::string& m) {
    return workloads::make_builtin(w, m);
  });
  const auto out = testing::internal::GetCapturedStdout();
  EXPECT_EQ(rc, 0);
  const auto r = driver::parse_trial_output(out);
  EXPECT_EQ(r.status, TrialStatus::Found);

  testing::internal::CaptureStdout();
  const char* bad[] = {"child", "--workload", "bst", "--property", "Nope", "--strategy", "bespoke", "--seed", "3"};
  const int rc2 = child_main(static_cast<int>(std::size(bad)), bad, [](const std::string& w, const std::string& m) {
    return workloads::make_builtin(w, m);
  });
  const auto err = driver::parse_trial_output(testing::internal::GetCapturedStdout());
  EXPECT_EQ(rc2, 1);
  EXPECT_EQ(err.status, TrialStatus::Error);
  EXPECT_TRUE(err.message.has_value());
}
