#include "pbtbench/workloads/variants.hpp"

namespace pbtbench::workloads {

namespace {

template <typename Ops>
Ops lookup(std::span<const VariantEntry<Ops>> table, std::string_view workload, std::string_view mutant) {
  if (mutant.empty()) mutant = "base";
  for (const auto& entry : table) {
    if (entry.name == mutant) return entry.ops();
  }
  throw UnknownVariant("UnknownMutant: workload '" + std::string(workload) + "' has no mutant '" +
                       std::string(mutant) + "'");
}

template <typename Ops>
std::vector<std::string> names(std::span<const VariantEntry<Ops>> table) {
  std::vector<std::string> out;
  for (const auto& entry : table) {
    if (entry.name != "base") out.emplace_back(entry.name);
  }
  return out;
}

}  // namespace

std::vector<std::string> builtin_workloads() { return {"bst", "rbt"}; }

std::vector<std::string> builtin_mutants(std::string_view workload) {
  if (workload == "bst") return names(generated::bst_variants());
  if (workload == "rbt") return names(generated::rbt_variants());
  throw UnknownVariant("unknown workload '" + std::string(workload) + "'");
}

std::unique_ptr<Workload> make_builtin(std::string_view workload, std::string_view mutant) {
  if (workload == "bst") return make_bst(lookup(generated::bst_variants(), workload, mutant));
  if (workload == "rbt") return make_rbt(lookup(generated::rbt_variants(), workload, mutant));
  throw UnknownVariant("unknown workload '" + std::string(workload) + "'");
}

}  // namespace pbtbench::workloads
