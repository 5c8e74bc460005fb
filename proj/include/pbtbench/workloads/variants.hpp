#pragma once

// Registry of every implementation variant of the built-in workloads,
// compiled into one binary. The tables are generated at build time by
// rendering each mutant of the workload sources into its own namespace.

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pbtbench/workloads/workload.hpp"

namespace pbtbench::workloads {

template <typename Ops>
struct VariantEntry {
  std::string_view name;  // "base" for the unmutated implementation
  Ops (*ops)();
};

namespace generated {
std::span<const VariantEntry<bst::Ops>> bst_variants();
std::span<const VariantEntry<rbt::Ops>> rbt_variants();
}  // namespace generated

class UnknownVariant : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::vector<std::string> builtin_workloads();

/// Mutant names of a built-in workload (excluding "base").
std::vector<std::string> builtin_mutants(std::string_view workload);

/// Binds a built-in workload to a variant. An empty name or "base" selects
/// the correct implementation.
std::unique_ptr<Workload> make_builtin(std::string_view workload, std::string_view mutant = {});

}  // namespace pbtbench::workloads
