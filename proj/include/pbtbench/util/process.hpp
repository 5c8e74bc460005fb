#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

namespace pbtbench::util {

struct ProcessResult {
  int exit_code = -1;  // valid when !signaled
  bool signaled = false;
  int signal = 0;
  bool timed_out = false;
  std::string out;
  std::string err;
  double elapsed_s = 0;
};

class SpawnFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs `command` with /bin/sh -c in a fresh process group. When `timeout_s`
/// elapses the whole group is killed and `timed_out` is set. Output beyond
/// `max_output` bytes per stream is dropped from the front.
ProcessResult run_shell(const std::string& command, std::optional<double> timeout_s,
                        const std::filesystem::path& cwd = {}, std::size_t max_output = 1 << 20);

}  // namespace pbtbench::util
