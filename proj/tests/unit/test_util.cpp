#include <gtest/gtest.h>

#include "pbtbench/util/fs.hpp"
#include "pbtbench/util/glob.hpp"
#include "pbtbench/util/hash.hpp"
#include "pbtbench/util/template.hpp"
#include "support.hpp"

using namespace pbtbench::util;

TEST(Glob, Wildcards) {
  EXPECT_TRUE(glob_match("*", ""));
  EXPECT_TRUE(glob_match("insert_*", "insert_keep"));
  EXPECT_FALSE(glob_match("insert_*", "delete_x"));
  EXPECT_TRUE(glob_match("?x*y", "axzzy"));
  EXPECT_FALSE(glob_match("?", ""));
  EXPECT_TRUE(glob_match("a*b*c", "abbbc"));
  EXPECT_FALSE(glob_match("a*b*c", "abbb"));
  EXPECT_TRUE(glob_match("[ab]", "[ab]"));
}

TEST(GlobProperty, AgreesWithRecursiveOracle) {
  std::function<bool(std::string_view, std::string_view)> oracle = [&](std::string_view p, std::string_view t) {
    if (p.empty()) return t.empty();
    if (p[0] == '*') return oracle(p.substr(1), t) || (!t.empty() && oracle(p, t.substr(1)));
    if (t.empty()) return false;
    return (p[0] == '?' || p[0] == t[0]) && oracle(p.substr(1), t.substr(1));
  };
  std::uint64_t s = 1;
  auto pick = [&](std::string_view alphabet, int len) {
    std::string out;
    for (int i = 0; i < len; ++i) {
      s = splitmix64(s);
      out += alphabet[s % alphabet.size()];
    }
    return out;
  };
  for (int i = 0; i < 20000; ++i) {
    const auto p = pick("ab*?", static_cast<int>(i % 6));
    const auto t = pick("ab", static_cast<int>((i / 6) % 7));
    ASSERT_EQ(glob_match(p, t), oracle(p, t)) << p << " " << t;
  }
}

TEST(Template, PlaceholdersAndBraces) {
  EXPECT_EQ(placeholders("{a} {{x}} {b} {a}"), (std::vector<std::string>{"a", "b", "a"}));
  EXPECT_EQ(expand("{{{a}}}", {{"a", "v"}}), "{v}");
  EXPECT_THROW(placeholders("{a"), TemplateError);
  EXPECT_THROW(placeholders("a}"), TemplateError);
  EXPECT_THROW(placeholders("{}"), TemplateError);
  EXPECT_THROW(expand("{missing}", {}), TemplateError);
}

TEST(Template, QuotesValues) {
  EXPECT_EQ(shell_quote("plain-1.0"), "plain-1.0");
  EXPECT_EQ(shell_quote(""), "''");
  EXPECT_EQ(shell_quote("a b"), "'a b'");
  EXPECT_EQ(shell_quote("it's"), "'it'\\''s'");
  EXPECT_EQ(expand("run {x} {y}", {{"x", "a;b"}, {"y", "-O2 -g"}}, {"y"}), "run 'a;b' -O2 -g");
}

TEST(Fs, AtomicWriteAndAppend) {
  pbtbench::test::TempDir tmp("util");
  const auto p = tmp.path() / "f.txt";
  write_file_atomic(p, "one");
  write_file_atomic(p, "two");
  EXPECT_EQ(read_file(p), "two");
  append_line(p, "x");
  EXPECT_EQ(read_file(p), "twox\n");
  EXPECT_THROW(read_file(tmp.path() / "absent"), std::exception);
  EXPECT_EQ(content_digest("abc"), content_digest("abc"));
  EXPECT_NE(content_digest("abc"), content_digest("abd"));
}

TEST(Hash, KnownVectors) {
  // FNV-1a 64 of "a" and the first SplitMix64 output from state 0.
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
}
