// Command-line front end: mutants, experiments, workloads, analysis, reports,
// corpora, and the built-in strategy process.

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pbtbench/analysis/analysis.hpp"
#include "pbtbench/build_paths.hpp"
#include "pbtbench/crosslang/codec.hpp"
#include "pbtbench/crosslang/corpus.hpp"
#include "pbtbench/driver/driver.hpp"
#include "pbtbench/harness/runner.hpp"
#include "pbtbench/mutation/mutation.hpp"
#include "pbtbench/report/report.hpp"
#include "pbtbench/schema/schema.hpp"
#include "pbtbench/util/fs.hpp"
#include "pbtbench/version.hpp"
#include "pbtbench/workloads/exhaustive.hpp"
#include "pbtbench/workloads/variants.hpp"

namespace fs = std::filesystem;
using namespace pbtbench;

namespace {

const mutation::CommentStyle& style_for(const fs::path& file, const std::map<std::string, mutation::CommentStyle>& styles) {
  const auto it = styles.find(file.extension().string());
  if (it == styles.end()) throw std::invalid_argument("no comment style for " + file.string());
  return it->second;
}

int mutant_list(const fs::path& dir) {
  const auto styles = mutation::default_styles();
  for (const auto& m : mutation::enumerate_mutants(dir, styles)) {
    const auto parsed = mutation::parse_variations(util::read_file(dir / m.file), style_for(m.file, styles));
    const bool active = parsed.variations[m.variation].active_mutant() == m.name;
    std::cout << m.file.generic_string() << '\t' << m.variation << '\t' << m.name << (active ? "\t(active)" : "")
              << '\n';
  }
  return 0;
}

int mutant_toggle(const fs::path& file, std::size_t variation, const std::string& select) {
  const auto styles = mutation::default_styles();
  const auto parsed = mutation::parse_variations(util::read_file(file), style_for(file, styles));
  if (variation >= parsed.variations.size()) {
    std::cerr << file.string() << " has " << parsed.variations.size() << " variations\n";
    return 2;
  }
  auto sel = mutation::as_found(parsed);
  sel[variation] = select == "base" ? std::nullopt : std::optional(select);
  util::write_file_atomic(file, mutation::render(parsed, sel));
  return 0;
}

int mutant_validate(const fs::path& dir) {
  const auto styles = mutation::default_styles();
  int bad = 0;
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && styles.count(e.path().extension().string())) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    try {
      const auto parsed = mutation::parse_variations(util::read_file(f), style_for(f, styles));
      if (!mutation::is_canonical(parsed)) {
        std::cerr << f.string() << ": commented alternatives are not in canonical layout\n";
        ++bad;
      }
    } catch (const mutation::MutationError& e) {
      std::cerr << f.string() << ":" << e.line() << ": " << e.what() << '\n';
      ++bad;
    }
  }
  std::cout << files.size() << " files, " << bad << " with problems\n";
  return bad ? 1 : 0;
}

int experiment_new(const fs::path& dir) {
  for (const char* sub : {"workloads", "tests", "results", "analysis"}) fs::create_directories(dir / sub);
  std::cout << "created experiment " << dir.string() << '\n';
  return 0;
}

int workload_add(const fs::path& experiment, const std::string& name) {
  const fs::path src = fs::path(build_paths::source_dir) / "workloads" / name;
  if (!fs::exists(src / "config.json")) {
    std::cerr << "no built-in workload '" << name << "'\n";
    return 2;
  }
  const fs::path dest = experiment / "workloads" / name;
  fs::create_directories(dest.parent_path());
  fs::remove_all(dest);
  fs::copy(src, dest, fs::copy_options::recursive);
  const auto wl = schema::load_workload(dest);
  const fs::path test = experiment / "tests" / name / "default.json";
  fs::create_directories(test.parent_path());
  util::write_file_atomic(test, schema::to_json(schema::default_test_spec(wl.config)).dump(2) + "\n");
  std::cout << "added " << name << " with " << schema::workload_tasks(wl).size() << " tasks; test "
            << fs::relative(test, experiment).generic_string() << '\n';
  return 0;
}

int workload_check(const std::string& name) {
  const auto base = workloads::make_builtin(name);
  int problems = 0;
  for (const auto& p : base->properties()) {
    if (workloads::find_failure(*base, p.name)) {
      std::cout << "base\t" << p.name << "\tFAILS\n";
      ++problems;
    }
  }
  for (const auto& m : workloads::builtin_mutants(name)) {
    const auto wl = workloads::make_builtin(name, m);
    for (const auto& p : wl->properties()) {
      if (const auto cx = workloads::find_failure(*wl, p.name)) {
        std::cout << m << '\t' << p.name << '\t' << crosslang::serialize_input(*cx, p.signature) << '\n';
      }
    }
  }
  return problems ? 1 : 0;
}

struct RunArgs {
  std::string tests;
  fs::path experiment = ".";
  int jobs = 1;
  std::optional<double> timeout;
  std::optional<int> trials;
  std::optional<std::uint64_t> max_tests;
  std::uint64_t seed = 0;
};

int experiment_run(const RunArgs& a) {
  const auto spec = schema::load_test_spec(a.experiment / "tests" / (a.tests + ".json"));
  driver::DriverOptions opts;
  opts.experiment = a.experiment;
  opts.seed = a.seed;
  opts.jobs = a.jobs;
  opts.timeout_s = a.timeout;
  opts.trials = a.trials;
  opts.max_tests = a.max_tests;
  opts.log = [](const std::string& s) { std::cerr << s << '\n'; };
  const auto out = driver::run_experiment(spec, a.experiment / "results" / (a.tests + ".jsonl"), opts);
  std::cout << out.results.string() << ": " << out.written << " written, " << out.skipped << " already present, "
            << out.errors << " errors\n";
  return 0;
}

std::vector<double> parse_buckets(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw std::invalid_argument("bad bucket threshold '" + item + "'");
  }
  return out;
}

int analyze(const fs::path& results, double alpha, const std::string& buckets, bool partial, const fs::path& out_dir) {
  const auto records = driver::read_results(results);
  if (records.empty()) {
    std::cerr << results.string() << " holds no records\n";
    return 2;
  }
  analysis::AnalysisConfig cfg;
  cfg.alpha = alpha;
  cfg.partial = partial;
  if (!buckets.empty()) {
    cfg.scheme.thresholds = parse_buckets(buckets);
  } else {
    double timeout = 0;
    for (const auto& r : records) timeout = std::max(timeout, r.request.timeout_s);
    cfg.scheme = analysis::BucketScheme::for_timeout(timeout);
  }
  const auto a = analysis::summarize(records, cfg);
  fs::create_directories(out_dir);
  util::write_file_atomic(out_dir / "summary.json", analysis::summary_json(a, cfg).dump(2) + "\n");
  util::write_file_atomic(out_dir / "comparisons.json", analysis::comparisons_json(a, cfg).dump(2) + "\n");
  for (const auto& b : analysis::bucket_counts(a, cfg.scheme)) {
    std::cout << b.workload << ' ' << b.strategy << ':';
    for (std::size_t i = 0; i < b.counts.size(); ++i) std::cout << ' ' << cfg.scheme.label(i) << '=' << b.counts[i];
    std::cout << '\n';
  }
  std::cout << "wrote " << (out_dir / "summary.json").string() << " and " << (out_dir / "comparisons.json").string()
            << '\n';
  return 0;
}

int render_report(const fs::path& summary_path, const fs::path& out, bool tables, const std::string& title) {
  const auto summary = nlohmann::json::parse(util::read_file(summary_path));
  const auto rows = report::rows_from_summary(summary);
  const auto scheme = report::scheme_from_summary(summary);
  util::write_file_atomic(out, report::bucket_chart_svg(rows, scheme, title.empty() ? out.stem().string() : title));
  std::cout << "wrote " << out.string() << '\n';
  if (tables) {
    const auto table = report::summary_rows(summary);
    auto csv = out;
    util::write_file_atomic(csv.replace_extension(".csv"), report::export_csv(table));
    std::cout << "wrote " << csv.string() << "\n\n" << report::export_text(table);
  }
  return 0;
}

int corpus_gen(const std::string& workload, crosslang::CorpusGenOptions opts, const fs::path& out) {
  const auto wl = workloads::make_builtin(workload);
  std::ofstream f(out, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + out.string());
  const auto n = crosslang::corpus_gen(*wl, opts, f);
  std::cerr << "wrote " << n << " entries to " << out.string() << '\n';
  return 0;
}

int corpus_run(const fs::path& corpus, const std::string& workload, const std::string& property,
               const std::string& mutant, double timeout_s) {
  driver::TrialResult r;
  try {
    std::ifstream f(corpus, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + corpus.string());
    const auto wl = workloads::make_builtin(workload, mutant);
    r = crosslang::corpus_run(f, *wl, property, timeout_s > 0 ? std::optional(timeout_s) : std::nullopt);
  } catch (const std::exception& e) {
    r = driver::TrialResult{};
    r.status = driver::TrialStatus::Error;
    r.message = e.what();
  }
  std::cout << driver::format_trial_output(r) << std::endl;
  return r.status == driver::TrialStatus::Error ? 1 : 0;
}

std::unique_ptr<workloads::Workload> resolve_builtin(const std::string& workload, const std::string& mutant) {
  return workloads::make_builtin(workload, mutant);
}

}  // namespace

int main(int argc, char** argv) {
  // The strategy process takes its own options verbatim.
  if (argc >= 3 && std::strcmp(argv[1], "harness") == 0 && std::strcmp(argv[2], "run") == 0) {
    std::vector<const char*> args{argv[0]};
    args.insert(args.end(), argv + 3, argv + argc);
    return harness::child_main(static_cast<int>(args.size()), args.data(), resolve_builtin);
  }

  CLI::App app{"Evaluate property-based testing strategies against injected bugs"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  int rc = 0;

  auto* mutant = app.add_subcommand("mutant", "inspect and toggle mutants in source files")->require_subcommand(1);
  fs::path m_dir, m_file;
  std::size_t m_var = 0;
  std::string m_select;
  auto* m_list = mutant->add_subcommand("list", "list every mutant under a directory");
  m_list->add_option("dir", m_dir)->required()->check(CLI::ExistingDirectory);
  m_list->callback([&] { rc = mutant_list(m_dir); });
  auto* m_toggle = mutant->add_subcommand("toggle", "activate one alternative of a variation in place");
  m_toggle->add_option("file", m_file)->required()->check(CLI::ExistingFile);
  m_toggle->add_option("--variation", m_var, "variation index")->required();
  m_toggle->add_option("--select", m_select, "'base' or a mutant name")->required();
  m_toggle->callback([&] { rc = mutant_toggle(m_file, m_var, m_select); });
  auto* m_validate = mutant->add_subcommand("validate", "parse every source file; nonzero exit on errors");
  m_validate->add_option("dir", m_dir)->required()->check(CLI::ExistingDirectory);
  m_validate->callback([&] { rc = mutant_validate(m_dir); });

  auto* experiment = app.add_subcommand("experiment", "create and run experiments")->require_subcommand(1);
  fs::path e_name;
  auto* e_new = experiment->add_subcommand("new", "create an experiment directory");
  e_new->add_option("name", e_name)->required();
  e_new->callback([&] { rc = experiment_new(e_name); });
  RunArgs run;
  auto* e_run = experiment->add_subcommand("run", "run the trials of a test spec");
  e_run->add_option("--tests", run.tests, "test spec as <workload>/<test>, under <experiment>/tests")->required();
  e_run->add_option("--experiment", run.experiment, "experiment directory")->check(CLI::ExistingDirectory);
  e_run->add_option("--jobs", run.jobs, "parallel trials")->check(CLI::PositiveNumber);
  e_run->add_option("--timeout", run.timeout, "override the per-trial timeout in seconds")->check(CLI::PositiveNumber);
  e_run->add_option("--trials", run.trials, "override trials per task and strategy")->check(CLI::PositiveNumber);
  e_run->add_option("--max-tests", run.max_tests, "override the test budget per trial")->check(CLI::PositiveNumber);
  e_run->add_option("--seed", run.seed, "experiment seed");
  e_run->callback([&] { rc = experiment_run(run); });

  auto* workload = app.add_subcommand("workload", "manage workloads")->require_subcommand(1);
  fs::path w_exp = ".";
  std::string w_name;
  auto* w_add = workload->add_subcommand("add", "copy a built-in workload into an experiment");
  w_add->add_option("--experiment", w_exp, "experiment directory")->check(CLI::ExistingDirectory);
  w_add->add_option("workload", w_name)->required();
  w_add->callback([&] { rc = workload_add(w_exp, w_name); });
  auto* w_check = workload->add_subcommand("check", "list (mutant, property) pairs falsifiable on small inputs");
  w_check->add_option("workload", w_name)->required();
  w_check->callback([&] { rc = workload_check(w_name); });

  fs::path results, out_dir = "analysis";
  double alpha = 0.05;
  std::string buckets;
  bool partial = false;
  auto* an = app.add_subcommand("analyze", "summarize a results log");
  an->add_option("--results", results, "results log (JSON Lines)")->required()->check(CLI::ExistingFile);
  an->add_option("--alpha", alpha, "significance level");
  an->add_option("--buckets", buckets, "comma-separated bucket thresholds in seconds (default: up to the timeout)");
  an->add_flag("--partial", partial, "give partially solved tasks a time bucket");
  an->add_option("--out-dir", out_dir, "where summary.json and comparisons.json go");
  an->callback([&] { rc = analyze(results, alpha, buckets, partial, out_dir); });

  fs::path summary, svg;
  bool csv = false;
  std::string title;
  auto* rep = app.add_subcommand("report", "render a task bucket chart");
  rep->add_option("--summary", summary, "summary.json from analyze")->required()->check(CLI::ExistingFile);
  rep->add_option("--out", svg, "SVG output path")->required();
  rep->add_option("--title", title, "chart title");
  rep->add_flag("--csv", csv, "also write <out>.csv and print a text table");
  rep->callback([&] { rc = render_report(summary, svg, csv, title); });

  auto* corpus = app.add_subcommand("corpus", "serialized input corpora")->require_subcommand(1);
  std::string c_workload, c_property, c_mutant;
  crosslang::CorpusGenOptions gen;
  fs::path c_out, c_file;
  double c_timeout = 0;
  auto* c_gen = corpus->add_subcommand("gen", "generate a corpus with per-input generation times");
  c_gen->add_option("--workload", c_workload)->required();
  c_gen->add_option("--strategy", gen.strategy);
  c_gen->add_option("--property", gen.property)->required();
  c_gen->add_option("--seed", gen.seed);
  c_gen->add_option("--count", gen.count, "entries (at most 1000000)");
  c_gen->add_option("--size", gen.size)->check(CLI::NonNegativeNumber);
  c_gen->add_flag("--ramp", gen.ramp);
  c_gen->add_option("--out", c_out)->required();
  c_gen->callback([&] { rc = corpus_gen(c_workload, gen, c_out); });
  auto* c_run = corpus->add_subcommand("run", "replay a corpus against a mutant and print the result line");
  c_run->add_option("--corpus", c_file)->required()->check(CLI::ExistingFile);
  c_run->add_option("--workload", c_workload)->required();
  c_run->add_option("--property", c_property)->required();
  c_run->add_option("--mutant", c_mutant);
  c_run->add_option("--timeout-s", c_timeout)->check(CLI::NonNegativeNumber);
  c_run->callback([&] { rc = corpus_run(c_file, c_workload, c_property, c_mutant, c_timeout); });

  app.add_subcommand("harness", "built-in strategy process: harness run --workload ... (see harness run --help)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return rc;
}
