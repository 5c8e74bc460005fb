#pragma once

// Child protocol: the strategy process prints one JSON object on its last
// stdout line.
//
//   status          "found" | "gave_up" | "error"       required
//   time_s          number >= 0                          required
//   tests           integer >= 0                         required
//   discards        integer >= 0                         required
//   counterexample  string                               required iff found
//   gen_time_s      number >= 0                          optional
//   exec_time_s     number >= 0                          optional
//   message         string                               optional (error detail)
//
// Unknown fields are ignored. "timeout" is never reported by a child; the
// driver assigns it.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pbtbench::driver {

enum class TrialStatus { Found, GaveUp, Timeout, Error };

std::string_view to_string(TrialStatus s) noexcept;
std::optional<TrialStatus> parse_status(std::string_view s) noexcept;

struct TrialResult {
  TrialStatus status = TrialStatus::Error;
  double time_s = 0;
  std::uint64_t tests = 0;
  std::uint64_t discards = 0;
  std::optional<std::string> counterexample;
  std::optional<double> gen_time_s;
  std::optional<double> exec_time_s;
  std::optional<std::string> message;

  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

class ProtocolViolation : public std::runtime_error {
 public:
  explicit ProtocolViolation(std::vector<std::string> problems);

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Parses the last non-empty line of `output`. Every problem found is reported,
/// not just the first.
TrialResult parse_trial_output(std::string_view output);

/// The single line a conforming child prints (no trailing newline).
std::string format_trial_output(const TrialResult& r);

}  // namespace pbtbench::driver
