#include <algorithm>

#include "pbtbench/mutation/mutation.hpp"
#include "pbtbench/util/fs.hpp"

namespace pbtbench::mutation {

namespace fs = std::filesystem;

std::vector<MutantRef> enumerate_mutants(const fs::path& root, const std::map<std::string, CommentStyle>& styles) {
  if (!fs::is_directory(root)) {
    throw std::runtime_error("not a directory: " + root.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && styles.contains(entry.path().extension().string())) {
      files.push_back(fs::relative(entry.path(), root));
    }
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });

  std::vector<MutantRef> out;
  for (const auto& rel : files) {
    const auto& style = styles.at(rel.extension().string());
    ParsedSource parsed;
    try {
      parsed = parse_variations(util::read_file(root / rel), style);
    } catch (const MutationError& e) {
      throw MutationError(e.kind(), e.offset(), e.line(), rel.generic_string() + ": " + e.what());
    }
    for (std::size_t v = 0; v < parsed.variations.size(); ++v) {
      for (const auto& m : parsed.variations[v].mutants) {
        out.push_back({rel, v, m.name});
      }
    }
  }
  return out;
}

}  // namespace pbtbench::mutation
