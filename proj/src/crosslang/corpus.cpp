#include "pbtbench/crosslang/corpus.hpp"

#include <chrono>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "pbtbench/crosslang/codec.hpp"

namespace pbtbench::crosslang {

using Clock = std::chrono::steady_clock;
using driver::TrialResult;
using driver::TrialStatus;
using nlohmann::json;
using workloads::Verdict;

CorpusError::CorpusError(std::size_t line, const std::string& detail)
    : std::runtime_error("corpus line " + std::to_string(line) + ": " + detail), line_(line) {}

std::uint64_t corpus_gen(const workloads::Workload& wl, const CorpusGenOptions& opts, std::ostream& out) {
  const auto& spec = wl.property(opts.property);
  harness::GenConfig gen;
  gen.size = opts.size;
  gen.ramp = opts.ramp;
  gen.validate();
  const auto generate = harness::make_generator(harness::parse_strategy(opts.strategy), spec.signature);

  nlohmann::ordered_json header = {{"format", kEncodingVersion}, {"workload", wl.name()},
                                   {"property", opts.property},   {"strategy", opts.strategy},
                                   {"seed", opts.seed},           {"size", opts.size}};
  out << header.dump() << '\n';

  const harness::Rng root(opts.seed);
  const std::uint64_t count = std::min(opts.count, kCorpusCap);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto start = Clock::now();
    const auto input = generate(root, i, gen);
    const double t = std::chrono::duration<double>(Clock::now() - start).count();
    nlohmann::ordered_json line = {{"gen_time_s", t}, {"value", serialize_input(input, spec.signature)}};
    out << line.dump() << '\n';
  }
  out.flush();
  return count;
}

namespace {

void check_header(const json& h, const workloads::Workload& wl, const std::string& property, std::size_t lineno) {
  const auto format = h.value("format", std::string());
  if (format != kEncodingVersion) {
    throw CorpusError(lineno, "unsupported format '" + format + "', expected '" + std::string(kEncodingVersion) + "'");
  }
  if (h.contains("workload") && h["workload"] != wl.name()) {
    throw CorpusError(lineno, "corpus is for workload " + h["workload"].dump());
  }
  if (h.contains("property") && h["property"] != property) {
    throw CorpusError(lineno, "corpus is for property " + h["property"].dump());
  }
}

}  // namespace

TrialResult corpus_run(std::istream& in, const workloads::Workload& wl, const std::string& property,
                       std::optional<double> timeout_s, const harness::VerdictSink& sink) {
  const auto& spec = wl.property(property);
  const auto evaluate = wl.evaluator(property);
  TrialResult r;
  r.status = TrialStatus::GaveUp;
  double gen = 0, exec = 0;
  std::uint64_t index = 0;
  std::size_t lineno = 0;
  std::string line;
  bool header_seen = false;

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) throw CorpusError(lineno, "not a JSON object");
    if (!header_seen) {
      header_seen = true;
      if (doc.contains("format")) {
        check_header(doc, wl, property, lineno);
        continue;
      }
    }
    const auto t = doc.find("gen_time_s");
    const auto v = doc.find("value");
    if (t == doc.end() || !t->is_number() || t->get<double>() < 0) {
      throw CorpusError(lineno, "gen_time_s must be a non-negative number");
    }
    if (v == doc.end() || !v->is_string()) throw CorpusError(lineno, "value must be a string");
    if (timeout_s && gen + exec >= *timeout_s) {
      r.message = "time budget exhausted";
      break;
    }

    workloads::Input input;
    try {
      input = deserialize_input(v->get<std::string>(), spec.signature);
    } catch (const SExprError& e) {
      throw CorpusError(lineno, e.what());
    } catch (const SignatureMismatch& e) {
      throw SignatureMismatch("corpus line " + std::to_string(lineno) + ": " + e.what());
    }
    gen += t->get<double>();

    const auto start = Clock::now();
    const Verdict verdict = evaluate(input);
    exec += std::chrono::duration<double>(Clock::now() - start).count();

    if (sink) sink(index, verdict);
    ++index;
    if (verdict == Verdict::Discard) {
      ++r.discards;
      continue;
    }
    ++r.tests;
    if (verdict == Verdict::Fail) {
      r.status = TrialStatus::Found;
      r.counterexample = v->get<std::string>();
      break;
    }
  }
  if (in.bad()) throw CorpusError(lineno, "read error");

  r.gen_time_s = gen;
  r.exec_time_s = exec;
  r.time_s = gen + exec;
  return r;
}

}  // namespace pbtbench::crosslang
