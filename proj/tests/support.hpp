#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "pbtbench/build_paths.hpp"

namespace pbtbench::test {

inline std::filesystem::path source_dir() { return build_paths::source_dir; }
inline std::filesystem::path fixtures() { return PBTBENCH_FIXTURES; }

/// Fresh scratch directory, removed when the object goes away.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("pbtbench-" + tag + "-" + std::to_string(rd()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace pbtbench::test
