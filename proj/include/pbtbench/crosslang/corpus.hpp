#pragma once

// Corpus files: JSON Lines. The first line is a header
//   {"format": "pbtbench-sexpr-1", "workload": ..., "property": ..., "strategy": ..., "seed": ..., "size": ...}
// and every further line is one input
//   {"gen_time_s": <seconds>, "value": "<serialized input tuple>"}

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "pbtbench/driver/protocol.hpp"
#include "pbtbench/harness/runner.hpp"

namespace pbtbench::crosslang {

inline constexpr std::uint64_t kCorpusCap = 1'000'000;

class CorpusError : public std::runtime_error {
 public:
  CorpusError(std::size_t line, const std::string& detail);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct CorpusHeader {
  std::string format;
  std::string workload;
  std::string property;
  std::string strategy;
  std::uint64_t seed = 0;
  int size = 10;
};

struct CorpusGenOptions {
  std::string property;
  std::string strategy = "bespoke";
  std::uint64_t seed = 0;
  std::uint64_t count = 1000;
  int size = 10;
  bool ramp = false;
};

/// Streams `count` inputs (capped at kCorpusCap) drawn exactly as the
/// in-process runner would draw them for the same seed, each with its own
/// generation time. Returns the number of entries written.
std::uint64_t corpus_gen(const workloads::Workload& wl, const CorpusGenOptions& opts, std::ostream& out);

/// Replays a corpus in order against `wl` until the first failure.
/// gen_time_s sums the consumed entries' times, exec_time_s is measured
/// property evaluation only, and time_s is their sum. Entries failing the
/// precondition count as discards. When the running time passes `timeout_s`
/// the replay stops with gave_up.
/// Throws CorpusError for malformed lines and SignatureMismatch (with the
/// line number in its message) for values of the wrong shape.
driver::TrialResult corpus_run(std::istream& in, const workloads::Workload& wl, const std::string& property,
                               std::optional<double> timeout_s = std::nullopt,
                               const harness::VerdictSink& sink = {});

}  // namespace pbtbench::crosslang
