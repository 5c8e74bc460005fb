#include "pbtbench/schema/schema.hpp"

#include <algorithm>
#include <set>

#include "pbtbench/util/fs.hpp"
#include "pbtbench/util/glob.hpp"
#include "pbtbench/util/template.hpp"

namespace pbtbench::schema {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view to_string(IssueKind k) noexcept {
  switch (k) {
    case IssueKind::MissingField: return "MissingField";
    case IssueKind::InvalidValue: return "InvalidValue";
    case IssueKind::UnknownPlaceholder: return "UnknownPlaceholder";
    case IssueKind::DuplicateName: return "DuplicateName";
    case IssueKind::UnknownReference: return "UnknownReference";
    case IssueKind::EmptyExpansion: return "EmptyExpansion";
  }
  return "?";
}

std::string_view to_string(StrategyKind k) noexcept {
  switch (k) {
    case StrategyKind::Bespoke: return "bespoke";
    case StrategyKind::TypeBased: return "type-based";
    case StrategyKind::External: return "external";
  }
  return "?";
}

namespace {

std::string describe(const std::string& context, const std::vector<Issue>& issues) {
  std::string out = context + ":";
  for (const auto& i : issues) out += "\n  " + std::string(to_string(i.kind)) + " at " + i.path + ": " + i.message;
  return out;
}

// Collects every problem instead of stopping at the first.
class Reader {
 public:
  std::vector<Issue> issues;

  void add(IssueKind k, std::string path, std::string msg) { issues.push_back({k, std::move(path), std::move(msg)}); }

  const json* field(const json& obj, const std::string& path, const char* key, bool required) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) add(IssueKind::MissingField, path + "/" + key, "required field is missing");
      return nullptr;
    }
    return &*it;
  }

  std::optional<std::string> string(const json& obj, const std::string& path, const char* key, bool required = true) {
    const json* v = field(obj, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      add(IssueKind::InvalidValue, path + "/" + key, "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<std::string> identifier(const json& obj, const std::string& path, const char* key) {
    auto s = string(obj, path, key);
    if (s && !mutation::is_identifier(*s)) {
      add(IssueKind::InvalidValue, path + "/" + key, "'" + *s + "' is not an identifier");
      return std::nullopt;
    }
    return s;
  }

  const json* array(const json& obj, const std::string& path, const char* key, bool required = true) {
    const json* v = field(obj, path, key, required);
    if (v && !v->is_array()) {
      add(IssueKind::InvalidValue, path + "/" + key, "expected an array");
      return nullptr;
    }
    return v;
  }

  std::vector<std::string> strings(const json& obj, const std::string& path, const char* key, bool required = true) {
    std::vector<std::string> out;
    const json* arr = array(obj, path, key, required);
    if (!arr) return out;
    for (std::size_t i = 0; i < arr->size(); ++i) {
      if ((*arr)[i].is_string()) {
        out.push_back((*arr)[i].get<std::string>());
      } else {
        add(IssueKind::InvalidValue, path + "/" + key + "/" + std::to_string(i), "expected a string");
      }
    }
    return out;
  }

  bool object(const json& v, const std::string& path) {
    if (v.is_object()) return true;
    add(IssueKind::InvalidValue, path.empty() ? "/" : path, "expected an object");
    return false;
  }

  void check_template(const std::string& tmpl, const std::string& path, const std::vector<std::string>& allowed) {
    try {
      for (const auto& p : util::placeholders(tmpl)) {
        if (std::find(allowed.begin(), allowed.end(), p) == allowed.end()) {
          add(IssueKind::UnknownPlaceholder, path, "unknown placeholder {" + p + "}");
        }
      }
    } catch (const util::TemplateError& e) {
      add(IssueKind::InvalidValue, path, e.what());
    }
  }

  template <typename T, typename Key>
  void unique(const std::vector<T>& items, const std::string& path, Key key) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < items.size(); ++i) {
      const std::string k = key(items[i]);
      if (!seen.insert(k).second) add(IssueKind::DuplicateName, path + "/" + std::to_string(i), "duplicate '" + k + "'");
    }
  }
};

json read_json(const fs::path& path) {
  const std::string text = util::read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string(), {{IssueKind::InvalidValue, "/", std::string("not valid JSON: ") + e.what()}});
  }
}

}  // namespace

SchemaError::SchemaError(std::string context, std::vector<Issue> issues)
    : std::runtime_error(describe(context, issues)), issues_(std::move(issues)) {}

bool SchemaError::has(IssueKind k) const noexcept {
  return std::any_of(issues_.begin(), issues_.end(), [k](const Issue& i) { return i.kind == k; });
}

bool operator==(const WorkloadConfig& a, const WorkloadConfig& b) {
  auto style_eq = [](const auto& x, const auto& y) {
    return x.first == y.first && x.second.begin == y.second.begin && x.second.end == y.second.end &&
           x.second.marker == y.second.marker;
  };
  return a.name == b.name && a.language == b.language &&
         std::equal(a.comment_styles.begin(), a.comment_styles.end(), b.comment_styles.begin(),
                    b.comment_styles.end(), style_eq) &&
         a.source_roots == b.source_roots && a.properties == b.properties && a.strategies == b.strategies &&
         a.tasks == b.tasks && a.build == b.build && a.run == b.run;
}

const std::vector<std::string>& build_placeholders() {
  static const std::vector<std::string> names = {"cxx", "include", "lib", "staged", "out", "workload"};
  return names;
}

const std::vector<std::string>& run_placeholders() {
  static const std::vector<std::string> names = {"property", "mutant",    "strategy",     "seed",   "timeout_s",
                                                 "max_tests", "max_discards", "workload", "staged", "out"};
  return names;
}

WorkloadConfig parse_workload_config(const json& doc) {
  Reader rd;
  WorkloadConfig c;
  if (!rd.object(doc, "")) throw SchemaError("workload config", rd.issues);

  if (auto v = rd.identifier(doc, "", "name")) c.name = *v;
  if (auto v = rd.identifier(doc, "", "language")) c.language = *v;

  if (const json* styles = rd.field(doc, "", "comment_styles", true)) {
    if (rd.object(*styles, "/comment_styles")) {
      for (const auto& [ext, st] : styles->items()) {
        const std::string path = "/comment_styles/" + ext;
        if (!rd.object(st, path)) continue;
        mutation::CommentStyle style;
        const auto b = rd.string(st, path, "begin");
        const auto e = rd.string(st, path, "end");
        const auto m = rd.string(st, path, "marker", false);
        if (!b || !e) continue;
        style.begin = *b;
        style.end = *e;
        if (m) style.marker = *m;
        try {
          style.validate();
          c.comment_styles[ext] = style;
        } catch (const std::invalid_argument& ex) {
          rd.add(IssueKind::InvalidValue, path, ex.what());
        }
      }
    }
  }

  c.source_roots = rd.strings(doc, "", "source_roots");
  c.properties = rd.strings(doc, "", "properties");
  for (std::size_t i = 0; i < c.properties.size(); ++i) {
    if (!mutation::is_identifier(c.properties[i])) {
      rd.add(IssueKind::InvalidValue, "/properties/" + std::to_string(i), "'" + c.properties[i] + "' is not an identifier");
    }
  }
  rd.unique(c.properties, "/properties", [](const std::string& s) { return s; });

  if (const json* arr = rd.array(doc, "", "strategies")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const std::string path = "/strategies/" + std::to_string(i);
      const json& s = (*arr)[i];
      if (!rd.object(s, path)) continue;
      StrategySpec spec;
      if (auto v = rd.identifier(s, path, "name")) spec.name = *v;
      if (auto k = rd.string(s, path, "kind")) {
        if (*k == "bespoke") {
          spec.kind = StrategyKind::Bespoke;
        } else if (*k == "type-based") {
          spec.kind = StrategyKind::TypeBased;
        } else if (*k == "external") {
          spec.kind = StrategyKind::External;
        } else {
          rd.add(IssueKind::InvalidValue, path + "/kind", "kind must be bespoke, type-based or external");
        }
      }
      spec.args = rd.strings(s, path, "args", false);
      c.strategies.push_back(std::move(spec));
    }
    rd.unique(c.strategies, "/strategies", [](const StrategySpec& s) { return s.name; });
  }

  if (const json* arr = rd.array(doc, "", "tasks", false)) {
    c.tasks.emplace();
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const std::string path = "/tasks/" + std::to_string(i);
      if (!rd.object((*arr)[i], path)) continue;
      TaskRef t;
      if (auto v = rd.identifier((*arr)[i], path, "property")) t.property = *v;
      if (auto v = rd.identifier((*arr)[i], path, "mutant")) t.mutant = *v;
      if (!t.property.empty() &&
          std::find(c.properties.begin(), c.properties.end(), t.property) == c.properties.end()) {
        rd.add(IssueKind::UnknownReference, path + "/property", "property '" + t.property + "' is not declared");
      }
      c.tasks->push_back(std::move(t));
    }
    rd.unique(*c.tasks, "/tasks", [](const TaskRef& t) { return t.property + "/" + t.mutant; });
  }

  if (auto v = rd.string(doc, "", "build")) {
    c.build = *v;
    rd.check_template(c.build, "/build", build_placeholders());
  }
  if (auto v = rd.string(doc, "", "run")) {
    c.run = *v;
    rd.check_template(c.run, "/run", run_placeholders());
  }

  if (!rd.issues.empty()) throw SchemaError("workload config" + (c.name.empty() ? "" : " '" + c.name + "'"), rd.issues);
  return c;
}

WorkloadConfig load_workload_config(const fs::path& path) {
  try {
    return parse_workload_config(read_json(path));
  } catch (const SchemaError& e) {
    throw SchemaError(path.string(), e.issues());
  }
}

json to_json(const WorkloadConfig& c) {
  json styles = json::object();
  for (const auto& [ext, s] : c.comment_styles) styles[ext] = {{"begin", s.begin}, {"end", s.end}, {"marker", s.marker}};
  json strategies = json::array();
  for (const auto& s : c.strategies) {
    strategies.push_back({{"name", s.name}, {"kind", to_string(s.kind)}, {"args", s.args}});
  }
  json doc = {{"name", c.name},
              {"language", c.language},
              {"comment_styles", styles},
              {"source_roots", c.source_roots},
              {"properties", c.properties},
              {"strategies", strategies},
              {"build", c.build},
              {"run", c.run}};
  if (c.tasks) {
    json tasks = json::array();
    for (const auto& t : *c.tasks) tasks.push_back({{"property", t.property}, {"mutant", t.mutant}});
    doc["tasks"] = tasks;
  }
  return doc;
}

namespace {

// Positive integer, whether the JSON value is stored signed or unsigned.
bool positive_count(const json& t) {
  if (t.is_number_unsigned()) return t.get<std::uint64_t>() >= 1;
  return t.is_number_integer() && t.get<std::int64_t>() >= 1;
}

}  // namespace

TestSpec parse_test_spec(const json& doc) {
  Reader rd;
  TestSpec spec;
  if (!rd.object(doc, "")) throw SchemaError("test spec", rd.issues);
  if (auto v = rd.string(doc, "", "name")) spec.name = *v;

  if (const json* arr = rd.array(doc, "", "entries")) {
    if (arr->empty()) rd.add(IssueKind::InvalidValue, "/entries", "at least one entry is required");
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const std::string path = "/entries/" + std::to_string(i);
      const json& e = (*arr)[i];
      if (!rd.object(e, path)) continue;
      TestEntry entry;
      if (auto v = rd.identifier(e, path, "workload")) entry.workload = *v;
      if (e.contains("strategies")) entry.strategies = rd.strings(e, path, "strategies");
      if (const json* tasks = rd.array(e, path, "tasks", false)) {
        entry.tasks.clear();
        for (std::size_t j = 0; j < tasks->size(); ++j) {
          const std::string tpath = path + "/tasks/" + std::to_string(j);
          if (!rd.object((*tasks)[j], tpath)) continue;
          TaskFilter f;
          if (auto v = rd.string((*tasks)[j], tpath, "property", false)) f.property = *v;
          if (auto v = rd.string((*tasks)[j], tpath, "mutant", false)) f.mutant = *v;
          entry.tasks.push_back(std::move(f));
        }
      }
      if (const json* t = rd.field(e, path, "trials", false)) {
        if (!t->is_number_integer() || t->get<long long>() < 1) {
          rd.add(IssueKind::InvalidValue, path + "/trials", "trials must be an integer >= 1");
        } else {
          entry.trials = t->get<int>();
        }
      }
      if (const json* t = rd.field(e, path, "timeout_s", false)) {
        if (!t->is_number() || !(t->get<double>() > 0)) {
          rd.add(IssueKind::InvalidValue, path + "/timeout_s", "timeout_s must be a number > 0");
        } else {
          entry.timeout_s = t->get<double>();
        }
      }
      if (const json* t = rd.field(e, path, "max_tests", false)) {
        if (!positive_count(*t)) {
          rd.add(IssueKind::InvalidValue, path + "/max_tests", "max_tests must be an integer >= 1");
        } else {
          entry.max_tests = t->get<std::uint64_t>();
        }
      }
      if (const json* t = rd.field(e, path, "max_discards", false)) {
        if (!positive_count(*t)) {
          rd.add(IssueKind::InvalidValue, path + "/max_discards", "max_discards must be an integer >= 1");
        } else {
          entry.max_discards = t->get<std::uint64_t>();
        }
      }
      spec.entries.push_back(std::move(entry));
    }
  }
  if (!rd.issues.empty()) throw SchemaError("test spec", rd.issues);
  return spec;
}

TestSpec load_test_spec(const fs::path& path) {
  try {
    return parse_test_spec(read_json(path));
  } catch (const SchemaError& e) {
    throw SchemaError(path.string(), e.issues());
  }
}

json to_json(const TestSpec& s) {
  json entries = json::array();
  for (const auto& e : s.entries) {
    json tasks = json::array();
    for (const auto& t : e.tasks) tasks.push_back({{"property", t.property}, {"mutant", t.mutant}});
    json j = {{"workload", e.workload}, {"strategies", e.strategies}, {"tasks", tasks},
              {"trials", e.trials},     {"timeout_s", e.timeout_s},   {"max_tests", e.max_tests}};
    if (e.max_discards) j["max_discards"] = *e.max_discards;
    entries.push_back(std::move(j));
  }
  return {{"name", s.name}, {"entries", entries}};
}

std::string Task::id() const { return workload + "/" + property + "/" + mutant; }

LoadedWorkload load_workload(const fs::path& dir) {
  LoadedWorkload wl;
  wl.dir = dir;
  wl.config = load_workload_config(dir / "config.json");
  for (const auto& root : wl.config.source_roots) {
    for (auto ref : mutation::enumerate_mutants(dir / root, wl.config.comment_styles)) {
      ref.file = fs::path(root) / ref.file;
      wl.mutants.push_back(std::move(ref));
    }
  }
  if (wl.config.tasks) {
    std::vector<Issue> issues;
    for (std::size_t i = 0; i < wl.config.tasks->size(); ++i) {
      const auto& t = (*wl.config.tasks)[i];
      const bool known = std::any_of(wl.mutants.begin(), wl.mutants.end(),
                                     [&](const mutation::MutantRef& m) { return m.name == t.mutant; });
      if (!known) {
        issues.push_back({IssueKind::UnknownReference, "/tasks/" + std::to_string(i) + "/mutant",
                          "mutant '" + t.mutant + "' does not occur in the sources"});
      }
    }
    if (!issues.empty()) throw SchemaError((dir / "config.json").string(), std::move(issues));
  }
  return wl;
}

std::vector<Task> workload_tasks(const LoadedWorkload& wl) {
  std::vector<Task> out;
  const auto& name = wl.config.name;
  if (wl.config.tasks) {
    for (const auto& t : *wl.config.tasks) out.push_back({name, t.property, t.mutant});
  } else {
    std::set<std::string> mutants;
    for (const auto& m : wl.mutants) mutants.insert(m.name);
    for (const auto& p : wl.config.properties) {
      for (const auto& m : mutants) out.push_back({name, p, m});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Run> expand_tasks(const TestSpec& spec, const std::map<std::string, LoadedWorkload>& workloads) {
  std::vector<Run> runs;
  std::vector<Issue> issues;
  for (std::size_t i = 0; i < spec.entries.size(); ++i) {
    const auto& e = spec.entries[i];
    const std::string path = "/entries/" + std::to_string(i);
    const auto wl = workloads.find(e.workload);
    if (wl == workloads.end()) {
      issues.push_back({IssueKind::UnknownReference, path + "/workload", "workload '" + e.workload + "' is not loaded"});
      continue;
    }
    std::vector<StrategySpec> strategies;
    for (const auto& s : wl->second.config.strategies) {
      if (std::any_of(e.strategies.begin(), e.strategies.end(),
                      [&](const std::string& g) { return util::glob_match(g, s.name); })) {
        strategies.push_back(s);
      }
    }
    std::sort(strategies.begin(), strategies.end(),
              [](const StrategySpec& a, const StrategySpec& b) { return a.name < b.name; });
    std::vector<Task> tasks;
    for (const auto& t : workload_tasks(wl->second)) {
      if (std::any_of(e.tasks.begin(), e.tasks.end(), [&](const TaskFilter& f) {
            return util::glob_match(f.property, t.property) && util::glob_match(f.mutant, t.mutant);
          })) {
        tasks.push_back(t);
      }
    }
    if (tasks.empty() || strategies.empty()) {
      issues.push_back({IssueKind::EmptyExpansion, path,
                        tasks.empty() ? "no task matches the filters" : "no strategy matches the filters"});
      continue;
    }
    for (const auto& t : tasks) {
      for (const auto& s : strategies) {
        runs.push_back({t, s, e.trials, e.timeout_s, e.max_tests, e.discard_limit()});
      }
    }
  }
  if (!issues.empty()) throw SchemaError("test spec '" + spec.name + "'", std::move(issues));
  return runs;
}

TestSpec default_test_spec(const WorkloadConfig& c) {
  TestEntry e;
  e.workload = c.name;
  // Trials are bounded by the timeout rather than by a test count.
  e.max_tests = 1'000'000'000;
  return {"default", {e}};
}

}  // namespace pbtbench::schema
