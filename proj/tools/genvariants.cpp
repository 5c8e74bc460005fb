// Build-time generator: renders every variant of a workload's sources into
// one translation unit, each inside its own namespace, plus a lookup table.

#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "pbtbench/mutation/mutation.hpp"
#include "pbtbench/util/fs.hpp"

namespace fs = std::filesystem;
using namespace pbtbench;

namespace {

struct SourceFile {
  fs::path path;
  fs::path relative;
  mutation::ParsedSource parsed;
};

void emit_variant(std::ostream& out, const std::vector<SourceFile>& files, const std::string& ns,
                  const mutation::MutantRef* mutant) {
  out << "#undef PBTBENCH_VARIANT_NS\n#define PBTBENCH_VARIANT_NS " << ns << "\n";
  for (const auto& f : files) {
    auto sel = mutation::all_base(f.parsed);
    if (mutant && mutant->file == f.relative) sel[mutant->variation] = mutant->name;
    out << "#line 1 \"" << f.path.generic_string() << "\"\n" << mutation::render(f.parsed, sel);
    if (!f.parsed.original.ends_with('\n')) out << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Render workload variants into a registry translation unit"};
  std::string workload, ext = ".impl";
  fs::path root, out_path;
  app.add_option("--workload", workload, "workload name (bst or rbt)")->required();
  app.add_option("--root", root, "workload source directory")->required()->check(CLI::ExistingDirectory);
  app.add_option("--out", out_path, "generated .cpp path")->required();
  app.add_option("--ext", ext, "extension of files holding variations");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto styles = mutation::default_styles();
    const auto style = styles.at(ext);

    std::vector<SourceFile> files;
    std::set<fs::path> sorted;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
      if (entry.is_regular_file() && entry.path().extension() == ext) sorted.insert(entry.path());
    }
    for (const auto& p : sorted) {
      files.push_back({fs::absolute(p), fs::relative(p, root), mutation::parse_variations(util::read_file(p), style)});
    }

    const auto mutants = mutation::enumerate_mutants(root, {{ext, style}});
    std::set<std::string> seen;
    for (const auto& m : mutants) {
      if (!seen.insert(m.name).second) throw std::runtime_error("mutant name '" + m.name + "' is not unique");
    }

    std::ostringstream out;
    out << "// Generated from " << root.generic_string() << "; do not edit.\n\n"
        << "#include \"pbtbench/workloads/variants.hpp\"\n\n";
    emit_variant(out, files, "base_variant", nullptr);
    for (const auto& m : mutants) emit_variant(out, files, "mutant_" + m.name, &m);

    out << "#line 1 \"" << out_path.filename().generic_string() << "\"\n"
        << "namespace pbtbench::workloads::generated {\n\n"
        << "namespace {\n"
        << "const VariantEntry<" << workload << "::Ops> k_" << workload << "_table[] = {\n"
        << "    {\"base\", &" << workload << "::base_variant::ops},\n";
    for (const auto& m : mutants) {
      out << "    {\"" << m.name << "\", &" << workload << "::mutant_" << m.name << "::ops},\n";
    }
    out << "};\n}  // namespace\n\n"
        << "std::span<const VariantEntry<" << workload << "::Ops>> " << workload << "_variants() { return k_"
        << workload << "_table; }\n\n"
        << "}  // namespace pbtbench::workloads::generated\n";

    // Leave the file untouched when nothing changed so dependents are not rebuilt.
    const std::string text = out.str();
    if (!fs::exists(out_path) || util::read_file(out_path) != text) util::write_file_atomic(out_path, text);
  } catch (const std::exception& e) {
    std::cerr << "genvariants: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
