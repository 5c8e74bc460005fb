#pragma once

// Exhaustive enumeration of small inputs, used as a ground-truth oracle.
// Tree arguments range over every tree satisfying the workload's input
// predicate (search order, plus red-black validity for colored trees); every
// property discards anything else, so nothing observable is skipped.

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "pbtbench/workloads/workload.hpp"

namespace pbtbench::workloads {

struct SmallSpace {
  int max_nodes = 4;
  int key_lo = 1;
  int key_hi = 4;
  int value_lo = 0;
  int value_hi = 1;
};

std::vector<bst::Tree> all_bsts(const SmallSpace& space);
std::vector<rbt::Tree> all_rbts(const SmallSpace& space);

/// Calls `visit` on every input of the signature; stops when it returns false.
void for_each_input(const Signature& sig, const SmallSpace& space,
                    const std::function<bool(const Input&)>& visit);

std::optional<Input> find_failure(const Workload& wl, std::string_view property, const SmallSpace& space = {});

}  // namespace pbtbench::workloads
