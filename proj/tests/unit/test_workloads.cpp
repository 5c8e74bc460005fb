#include <gtest/gtest.h>

#include <map>

#include "pbtbench/harness/rng.hpp"
#include "pbtbench/workloads/exhaustive.hpp"
#include "pbtbench/workloads/variants.hpp"

using namespace pbtbench;
using namespace pbtbench::workloads;

namespace {

bst::Tree leaf() { return {}; }
bst::Tree n(bst::Tree l, int k, int v, bst::Tree r) { return bst::Tree::node(std::move(l), k, v, std::move(r)); }

// Red-black validity written from the definition, sharing nothing with
// rbt::check: returns the black height or -1.
int rb_height(const rbt::Tree& t, std::optional<int> lo, std::optional<int> hi, bool parent_red) {
  if (t.empty()) return 0;
  const bool red = t->color == rbt::Color::Red;
  if (red && parent_red) return -1;
  if ((lo && t->key <= *lo) || (hi && t->key >= *hi)) return -1;
  const int l = rb_height(t->left, lo, t->key, red);
  const int r = rb_height(t->right, t->key, hi, red);
  if (l < 0 || r < 0 || l != r) return -1;
  return l + (red ? 0 : 1);
}

bool oracle_rbt(const rbt::Tree& t) { return rb_height(t, std::nullopt, std::nullopt, false) >= 0; }

// All shapes with `count` nodes over sorted keys, every value and color.
void shapes(int lo, int hi, int values, std::vector<rbt::Tree>& out) {
  if (lo > hi) {
    out.emplace_back();
    return;
  }
  for (int root = lo; root <= hi; ++root) {
    std::vector<rbt::Tree> ls, rs;
    shapes(lo, root - 1, values, ls);
    shapes(root + 1, hi, values, rs);
    for (const auto& l : ls)
      for (const auto& r : rs)
        for (int v = 0; v < values; ++v)
          for (auto c : {rbt::Color::Red, rbt::Color::Black}) out.push_back(rbt::Tree::node(c, l, root, v, r));
  }
}

}  // namespace

TEST(Bst, Predicates) {
  EXPECT_TRUE(bst::is_bst(leaf()));
  EXPECT_TRUE(bst::is_bst(n(n(leaf(), 1, 0, leaf()), 2, 0, n(leaf(), 3, 0, leaf()))));
  EXPECT_FALSE(bst::is_bst(n(n(leaf(), 2, 0, leaf()), 2, 0, leaf())));
  // Order must hold across the whole subtree, not only parent and child.
  EXPECT_FALSE(bst::is_bst(n(n(leaf(), 1, 0, n(leaf(), 5, 0, leaf())), 3, 0, leaf())));
  const auto t = n(n(leaf(), 1, 7, leaf()), 4, 8, leaf());
  EXPECT_EQ(bst::find(1, t), 7);
  EXPECT_EQ(bst::find(2, t), std::nullopt);
  EXPECT_EQ(bst::to_list(t), (bst::Bindings{{1, 7}, {4, 8}}));
  EXPECT_EQ(bst::size(t), 2u);
  EXPECT_EQ(bst::depth(t), 2u);
}

TEST(Bst, ReferenceAgreesWithModel) {
  harness::Rng rng(5);
  for (int round = 0; round < 2000; ++round) {
    bst::Tree a, b;
    bst::Bindings ma, mb;
    for (int i = 0; i < rng.uniform(0, 15); ++i) {
      const int k = rng.uniform(1, 20), v = rng.uniform(0, 9);
      a = bst::reference::insert(k, v, a);
      ma = bst::model::insert(k, v, ma);
      const int k2 = rng.uniform(1, 20);
      b = bst::reference::insert(k2, v, b);
      mb = bst::model::insert(k2, v, mb);
    }
    ASSERT_TRUE(bst::is_bst(a));
    ASSERT_EQ(bst::to_list(a), ma);
    const int d = rng.uniform(1, 20);
    const auto removed = bst::reference::remove(d, a);
    ASSERT_TRUE(bst::is_bst(removed));
    ASSERT_EQ(bst::to_list(removed), bst::model::remove(d, ma));
    const auto u = bst::reference::unite(a, b);
    ASSERT_TRUE(bst::is_bst(u));
    ASSERT_EQ(bst::to_list(u), bst::model::unite(ma, mb));
  }
}

TEST(Bst, ModelUnionIsLeftBiased) {
  EXPECT_EQ(bst::model::unite({{1, 1}, {3, 3}}, {{1, 9}, {2, 2}}), (bst::Bindings{{1, 1}, {2, 2}, {3, 3}}));
}

TEST(Rbt, CheckMatchesIndependentOracle) {
  std::vector<rbt::Tree> all;
  for (int hi = 0; hi <= 4; ++hi) shapes(1, hi, 2, all);
  std::size_t valid = 0;
  for (const auto& t : all) {
    ASSERT_EQ(rbt::is_rbt(t), oracle_rbt(t));
    valid += oracle_rbt(t);
  }
  EXPECT_GT(valid, 0u);
}

TEST(Rbt, ReferenceInsertKeepsInvariant) {
  harness::Rng rng(11);
  for (int round = 0; round < 2000; ++round) {
    rbt::Tree t;
    std::map<int, int> model;
    for (int i = 0; i < rng.uniform(0, 30); ++i) {
      const int k = rng.uniform(1, 40), v = rng.uniform(0, 9);
      t = rbt::reference::insert(k, v, t);
      model[k] = v;
      ASSERT_TRUE(oracle_rbt(t));
    }
    ASSERT_EQ(rbt::to_list(t), (std::vector<std::pair<int, int>>(model.begin(), model.end())));
  }
}

TEST(Exhaustive, SmallSpaceCounts) {
  // sum over k of C(4,k) * Catalan(k) * 2^k = 1 + 8 + 48 + 160 + 224
  EXPECT_EQ(all_bsts(SmallSpace{}).size(), 441u);

  std::vector<rbt::Tree> candidates;
  std::size_t expected = 0;
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<int> keys;
    for (int k = 1; k <= 4; ++k)
      if (mask & (1 << (k - 1))) keys.push_back(k);
    std::vector<rbt::Tree> trees;
    // Shapes over a set of keys have the same count as over 1..|keys|.
    shapes(1, static_cast<int>(keys.size()), 2, trees);
    for (const auto& t : trees) expected += oracle_rbt(t);
  }
  const auto rbts = all_rbts(SmallSpace{});
  EXPECT_EQ(rbts.size(), expected);
  for (const auto& t : rbts) EXPECT_TRUE(oracle_rbt(t));
}

TEST(Exhaustive, ForEachInputVisitsProduct) {
  SmallSpace s;
  std::size_t count = 0;
  for_each_input({ArgKind::BstTree, ArgKind::Key, ArgKind::Value}, s, [&](const Input&) {
    ++count;
    return true;
  });
  EXPECT_EQ(count, 441u * 4 * 2);
  count = 0;
  for_each_input({ArgKind::Key, ArgKind::Key}, s, [&](const Input&) { return ++count < 5; });
  EXPECT_EQ(count, 5u);
}

TEST(Properties, HandExamples) {
  const auto base = make_builtin("bst");
  const auto t = n(n(leaf(), 1, 0, leaf()), 3, 1, leaf());
  EXPECT_EQ(base->evaluate("InsertValid", {t, 2, 5}), Verdict::Pass);
  EXPECT_EQ(base->evaluate("InsertValid", {n(n(leaf(), 5, 0, leaf()), 3, 1, leaf()), 2, 5}), Verdict::Discard);

  const auto dup = make_builtin("bst", "insert_duplicate_entries");
  EXPECT_EQ(dup->evaluate("InsertValid", {t, 3, 5}), Verdict::Fail);
  EXPECT_EQ(dup->evaluate("InsertValid", {t, 2, 5}), Verdict::Pass);

  EXPECT_THROW(base->evaluator("NoSuchProperty"), UnknownProperty);
  EXPECT_THROW(make_builtin("bst", "no_such_mutant"), UnknownVariant);
  EXPECT_THROW(make_builtin("avl"), UnknownVariant);
}

TEST(Properties, BaseNeverFailsOnSmallInputs) {
  for (const auto& wl : builtin_workloads()) {
    const auto base = make_builtin(wl);
    for (const auto& p : base->properties()) {
      const auto cx = find_failure(*base, p.name);
      EXPECT_FALSE(cx.has_value()) << wl << " " << p.name;
    }
  }
}

TEST(Variants, RegistryMatchesSources) {
  EXPECT_EQ(builtin_workloads(), (std::vector<std::string>{"bst", "rbt"}));
  EXPECT_EQ(builtin_mutants("bst").size(), 9u);
  EXPECT_EQ(builtin_mutants("rbt").size(), 10u);
  for (const auto& wl : builtin_workloads()) {
    for (const auto& m : builtin_mutants(wl)) {
      const auto w = make_builtin(wl, m);
      bool some_fails = false;
      for (const auto& p : w->properties()) some_fails = some_fails || find_failure(*w, p.name).has_value();
      EXPECT_TRUE(some_fails) << wl << "/" << m << " is not caught by any property";
    }
  }
}
