#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "pbtbench/driver/protocol.hpp"
#include "pbtbench/harness/generators.hpp"
#include "pbtbench/workloads/workload.hpp"

namespace pbtbench::harness {

struct RunConfig {
  GenConfig gen;
  std::uint64_t seed = 0;
  /// In-process stop. The run then reports gave_up; a supervising driver
  /// reclassifies it as a timeout from its own clock.
  std::optional<double> timeout_s;
};

/// Receives every verdict in generation order.
using VerdictSink = std::function<void(std::uint64_t index, workloads::Verdict)>;
using InputPrinter = std::function<std::string(const workloads::Input&)>;

/// The test loop. `tests` counts executed inputs including the failing one;
/// `tests + discards` equals the number of inputs generated. Generation and
/// property execution are timed separately.
driver::TrialResult run_property(const workloads::Evaluator& property, const InputGenerator& generate,
                                 const InputPrinter& print, const RunConfig& cfg, const VerdictSink& sink = {});

/// run_property with the workload's evaluator, a built-in strategy and the
/// canonical S-expression printer.
driver::TrialResult run_workload(const workloads::Workload& wl, std::string_view property, std::string_view strategy,
                                 const RunConfig& cfg, const VerdictSink& sink = {});

using WorkloadResolver =
    std::function<std::unique_ptr<workloads::Workload>(const std::string& workload, const std::string& mutant)>;

/// Entry point of a strategy process. Parses the run options, runs one trial
/// and prints the child-protocol line. Returns the process exit code.
int child_main(int argc, const char* const* argv, const WorkloadResolver& resolve);

}  // namespace pbtbench::harness
