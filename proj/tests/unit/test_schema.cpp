#include <gtest/gtest.h>

#include "pbtbench/schema/schema.hpp"
#include "pbtbench/util/fs.hpp"
#include "support.hpp"

using namespace pbtbench;
using namespace pbtbench::schema;
using nlohmann::json;

namespace {

json minimal_config() {
  return json::parse(R"({
    "name": "toy",
    "language": "cpp",
    "comment_styles": {".impl": {"begin": "/*", "end": "*/"}},
    "source_roots": ["src"],
    "properties": ["P1", "P2", "P3", "P4", "P5"],
    "strategies": [{"name": "slow", "kind": "type-based"}, {"name": "fast", "kind": "bespoke", "args": ["--x", "a b"]}],
    "build": "{cxx} -I{include} {staged}/main.cpp {lib} -o {out}",
    "run": "{out} --property {property} --seed {seed} --timeout-s {timeout_s} --max-tests {max_tests}"
  })");
}

// A toy workload directory with four mutants spread over two files.
std::filesystem::path write_toy(const std::filesystem::path& root, const json& config) {
  const auto dir = root / "toy";
  std::filesystem::create_directories(dir / "src");
  util::write_file_atomic(dir / "config.json", config.dump(2));
  util::write_file_atomic(dir / "src" / "a.impl", "/*! */ x /*!! m_a */ /*! y */ /*!! m_b */ /*! z */ /* !*/\n");
  util::write_file_atomic(dir / "src" / "b.impl",
                          "/*! */ x /*!! insert_one */ /*! y */ /* !*/\n/*! */ x /*!! insert_two */ /*! y */ /* !*/\n");
  return dir;
}

SchemaError schema_error(const std::function<void()>& f) {
  try {
    f();
  } catch (const SchemaError& e) {
    return e;
  }
  ADD_FAILURE() << "expected SchemaError";
  return SchemaError("", {});
}

}  // namespace

TEST(Schema, BuiltinBstConfig) {
  const auto c = load_workload_config(test::source_dir() / "workloads" / "bst" / "config.json");
  EXPECT_EQ(c.name, "bst");
  const std::set<std::string> props(c.properties.begin(), c.properties.end());
  for (const char* p : {"InsertValid", "DeleteValid", "InsertPost", "DeletePost", "InsertModel", "UnionValid"}) {
    EXPECT_TRUE(props.count(p)) << p;
  }
  ASSERT_EQ(c.strategies.size(), 2u);
  EXPECT_EQ(c.strategies[0].name, "bespoke");
  EXPECT_EQ(c.strategies[1].name, "typebased");
  EXPECT_EQ(c.strategies[1].kind, StrategyKind::TypeBased);
}

TEST(Schema, ConfigRoundTrip) {
  const auto c = parse_workload_config(minimal_config());
  EXPECT_EQ(parse_workload_config(to_json(c)), c);
  EXPECT_EQ(c.comment_styles.at(".impl").marker, "!");
  EXPECT_EQ(c.strategies[1].args, (std::vector<std::string>{"--x", "a b"}));
  for (const char* f : {"bst", "rbt"}) {
    const auto b = load_workload_config(test::source_dir() / "workloads" / f / "config.json");
    EXPECT_EQ(parse_workload_config(to_json(b)), b);
  }
}

TEST(Schema, UnknownPlaceholder) {
  auto doc = minimal_config();
  doc["run"] = "{out} {unknown}";
  const auto e = schema_error([&] { parse_workload_config(doc); });
  EXPECT_TRUE(e.has(IssueKind::UnknownPlaceholder));
}

TEST(Schema, AllIssuesReported) {
  auto doc = minimal_config();
  doc.erase("language");
  doc["properties"].push_back("P1");
  doc["strategies"].push_back({{"name", "fast"}, {"kind", "bespoke"}});
  doc["build"] = "{nope}";
  const auto e = schema_error([&] { parse_workload_config(doc); });
  EXPECT_TRUE(e.has(IssueKind::MissingField));
  EXPECT_TRUE(e.has(IssueKind::DuplicateName));
  EXPECT_TRUE(e.has(IssueKind::UnknownPlaceholder));
  EXPECT_GE(e.issues().size(), 4u);
}

TEST(Schema, UnknownFieldsIgnored) {
  auto doc = minimal_config();
  doc["homepage"] = "x";
  EXPECT_NO_THROW(parse_workload_config(doc));
}

TEST(Schema, TestSpecDefaults) {
  const auto s = parse_test_spec(json::parse(R"({"name": "t", "entries": [{"workload": "toy"}]})"));
  ASSERT_EQ(s.entries.size(), 1u);
  EXPECT_EQ(s.entries[0].trials, 10);
  EXPECT_EQ(s.entries[0].timeout_s, 60);
  EXPECT_EQ(s.entries[0].strategies, std::vector<std::string>{"*"});
  EXPECT_EQ(s.entries[0].discard_limit(), 10 * s.entries[0].max_tests);
  EXPECT_EQ(parse_test_spec(to_json(s)), s);
}

TEST(Schema, TestSpecValidation) {
  auto e = schema_error([] { parse_test_spec(json::parse(R"({"name": "t", "entries": [{"workload": "toy", "trials": 0}]})")); });
  EXPECT_TRUE(e.has(IssueKind::InvalidValue));
  e = schema_error([] { parse_test_spec(json::parse(R"({"name": "t", "entries": [{"workload": "toy", "timeout_s": 0}]})")); });
  EXPECT_TRUE(e.has(IssueKind::InvalidValue));
  e = schema_error([] { parse_test_spec(json::parse(R"({"name": "t", "entries": []})")); });
  EXPECT_TRUE(e.has(IssueKind::InvalidValue));
  e = schema_error([] { parse_test_spec(json::parse(R"({"entries": [{"workload": "toy"}]})")); });
  EXPECT_TRUE(e.has(IssueKind::MissingField));
}

TEST(Schema, CrossProductExpansion) {
  test::TempDir tmp("schema");
  const auto wl = load_workload(write_toy(tmp.path(), minimal_config()));
  EXPECT_EQ(wl.mutants.size(), 4u);
  const std::map<std::string, LoadedWorkload> wls{{"toy", wl}};
  const auto spec = parse_test_spec(json::parse(R"({"name": "t", "entries": [{"workload": "toy"}]})"));
  const auto runs = expand_tasks(spec, wls);
  EXPECT_EQ(runs.size(), 40u);
  // Task id, then strategy name.
  EXPECT_EQ(runs[0].task.id(), "toy/P1/insert_one");
  EXPECT_EQ(runs[0].strategy.name, "fast");
  EXPECT_EQ(runs[1].strategy.name, "slow");
  EXPECT_EQ(expand_tasks(spec, wls).size(), runs.size());
}

TEST(Schema, FiltersAndManifest) {
  test::TempDir tmp("schema");
  auto cfg = minimal_config();
  const auto wl = load_workload(write_toy(tmp.path(), cfg));
  const std::map<std::string, LoadedWorkload> wls{{"toy", wl}};

  auto spec = parse_test_spec(json::parse(
      R"({"name": "t", "entries": [{"workload": "toy", "strategies": ["fast"], "tasks": [{"property": "Q*", "mutant": "*"}, {"property": "P2", "mutant": "insert_*"}]}]})"));
  auto runs = expand_tasks(spec, wls);
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs[0].task.mutant, "insert_one");
  EXPECT_EQ(runs[1].task.mutant, "insert_two");

  spec.entries[0].tasks = {{"*", "no_such_*"}};
  EXPECT_TRUE(schema_error([&] { expand_tasks(spec, wls); }).has(IssueKind::EmptyExpansion));

  spec.entries[0].tasks = {{"P3", "m_b"}};
  runs = expand_tasks(spec, wls);
  ASSERT_EQ(runs.size(), 1u);
  EXPECT_EQ(runs[0].task.id(), "toy/P3/m_b");

  spec.entries[0].workload = "missing";
  EXPECT_TRUE(schema_error([&] { expand_tasks(spec, wls); }).has(IssueKind::UnknownReference));

  cfg["tasks"] = json::array({{{"property", "P1"}, {"mutant", "m_a"}}, {{"property", "P4"}, {"mutant", "insert_two"}}});
  test::TempDir tmp2("schema");
  const auto wl2 = load_workload(write_toy(tmp2.path(), cfg));
  const auto tasks = workload_tasks(wl2);
  ASSERT_EQ(tasks.size(), 2u);
  EXPECT_EQ(tasks[0].id(), "toy/P1/m_a");

  cfg["tasks"] = json::array({{{"property", "P1"}, {"mutant", "ghost"}}});
  test::TempDir tmp3("schema");
  EXPECT_TRUE(schema_error([&] { load_workload(write_toy(tmp3.path(), cfg)); }).has(IssueKind::UnknownReference));
}

TEST(Schema, ZeroStrategiesLoadsButExpandsEmpty) {
  test::TempDir tmp("schema");
  auto cfg = minimal_config();
  cfg["strategies"] = json::array();
  const auto wl = load_workload(write_toy(tmp.path(), cfg));
  const auto spec = parse_test_spec(json::parse(R"({"name": "t", "entries": [{"workload": "toy"}]})"));
  EXPECT_TRUE(schema_error([&] { expand_tasks(spec, {{"toy", wl}}); }).has(IssueKind::EmptyExpansion));
}

TEST(Schema, DefaultTestSpecCoversEverything) {
  const auto c = load_workload_config(test::source_dir() / "workloads" / "rbt" / "config.json");
  const auto s = default_test_spec(c);
  ASSERT_EQ(s.entries.size(), 1u);
  EXPECT_EQ(s.entries[0].workload, "rbt");
  EXPECT_EQ(s.entries[0].trials, 10);
  EXPECT_EQ(s.entries[0].timeout_s, 60);
}

TEST(Schema, CountsAcceptSignedJsonIntegers) {
  json doc{{"name", "t"}, {"entries", {{{"workload", "toy"}, {"max_tests", 5}, {"max_discards", 7}}}}};
  ASSERT_TRUE(doc["entries"][0]["max_tests"].is_number_integer());
  const auto s = parse_test_spec(doc);
  EXPECT_EQ(s.entries[0].max_tests, 5u);
  doc["entries"][0]["max_tests"] = -5;
  EXPECT_TRUE(schema_error([&] { parse_test_spec(doc); }).has(IssueKind::InvalidValue));
}
