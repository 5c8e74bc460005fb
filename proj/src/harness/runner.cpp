#include "pbtbench/harness/runner.hpp"

#include <chrono>
#include <iostream>

#include "CLI11.hpp"
#include "pbtbench/crosslang/codec.hpp"

namespace pbtbench::harness {

using Clock = std::chrono::steady_clock;
using driver::TrialResult;
using driver::TrialStatus;
using workloads::Verdict;

namespace {

double seconds(Clock::duration d) { return std::chrono::duration<double>(d).count(); }

}  // namespace

TrialResult run_property(const workloads::Evaluator& property, const InputGenerator& generate,
                         const InputPrinter& print, const RunConfig& cfg, const VerdictSink& sink) {
  cfg.gen.validate();
  const Rng root(cfg.seed);
  TrialResult r;
  r.status = TrialStatus::GaveUp;
  Clock::duration gen{}, exec{};
  const auto start = Clock::now();
  auto now = start;
  const auto deadline = cfg.timeout_s ? std::optional(start + std::chrono::duration_cast<Clock::duration>(
                                                                  std::chrono::duration<double>(*cfg.timeout_s)))
                                      : std::nullopt;

  for (std::uint64_t index = 0; r.tests < cfg.gen.max_tests && r.discards < cfg.gen.max_discards; ++index) {
    if (deadline && now >= *deadline) break;
    workloads::Input input;
    Verdict verdict;
    try {
      input = generate(root, index, cfg.gen);
      const auto generated = Clock::now();
      gen += generated - now;
      verdict = property(input);
      now = Clock::now();
      exec += now - generated;
    } catch (const std::exception& e) {
      r.status = TrialStatus::Error;
      r.message = e.what();
      break;
    }
    if (sink) sink(index, verdict);
    if (verdict == Verdict::Discard) {
      ++r.discards;
      continue;
    }
    ++r.tests;
    if (verdict == Verdict::Fail) {
      r.status = TrialStatus::Found;
      r.counterexample = print(input);
      break;
    }
  }

  r.time_s = seconds(Clock::now() - start);
  r.gen_time_s = seconds(gen);
  r.exec_time_s = seconds(exec);
  return r;
}

TrialResult run_workload(const workloads::Workload& wl, std::string_view property, std::string_view strategy,
                         const RunConfig& cfg, const VerdictSink& sink) {
  const auto& spec = wl.property(property);
  const auto sig = spec.signature;
  return run_property(wl.evaluator(property), make_generator(parse_strategy(strategy), sig),
                      [sig](const workloads::Input& in) { return crosslang::serialize_input(in, sig); }, cfg, sink);
}

int child_main(int argc, const char* const* argv, const WorkloadResolver& resolve) {
  CLI::App app{"Run one property-based testing trial and print the result line"};
  std::string workload, mutant, property, strategy;
  RunConfig cfg;
  double timeout_s = 0;
  std::optional<std::uint64_t> max_discards;
  app.add_option("--workload", workload, "workload name")->required();
  app.add_option("--mutant", mutant, "mutant to activate (in-process runs only)");
  app.add_option("--property", property, "property name")->required();
  app.add_option("--strategy", strategy, "generation strategy")->required();
  app.add_option("--seed", cfg.seed, "trial seed")->required();
  app.add_option("--timeout-s", timeout_s, "stop after this many seconds (0 disables)")->check(CLI::NonNegativeNumber);
  app.add_option("--max-tests", cfg.gen.max_tests, "maximum executed tests")->check(CLI::PositiveNumber);
  app.add_option("--max-discards", max_discards, "maximum discarded inputs (default 10x max tests)")
      ->check(CLI::PositiveNumber);
  app.add_option("--size", cfg.gen.size, "generator size parameter")->check(CLI::NonNegativeNumber);
  app.add_flag("--ramp", cfg.gen.ramp, "cycle the size from 0 up to --size instead of fixing it");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  cfg.gen.max_discards = max_discards.value_or(cfg.gen.max_tests * 10);
  if (timeout_s > 0) cfg.timeout_s = timeout_s;

  TrialResult r;
  try {
    const auto wl = resolve(workload, mutant);
    r = run_workload(*wl, property, strategy, cfg);
  } catch (const std::exception& e) {
    r = TrialResult{};
    r.status = TrialStatus::Error;
    r.message = e.what();
  }
  std::cout << driver::format_trial_output(r) << std::endl;
  return r.status == TrialStatus::Error ? 1 : 0;
}

}  // namespace pbtbench::harness
