#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pbtbench/harness/rng.hpp"
#include "pbtbench/workloads/workload.hpp"

namespace pbtbench::harness {

struct GenConfig {
  int size = 10;
  std::uint64_t max_tests = 1'000'000;
  std::uint64_t max_discards = 10'000'000;
  /// When set, input i is generated at size i % (size + 1) instead of `size`.
  bool ramp = false;

  int key_lo() const noexcept { return 1; }
  int key_hi() const noexcept { return size > 0 ? 2 * size : 1; }

  /// Throws std::invalid_argument.
  void validate() const;
};

inline constexpr int kValueMax = 9;

bst::Tree gen_tree_typebased(Rng& rng, const GenConfig& cfg);
rbt::Tree gen_rbt_typebased(Rng& rng, const GenConfig& cfg);
bst::Tree gen_bst_bespoke(Rng& rng, const GenConfig& cfg);
rbt::Tree gen_rbt_bespoke(Rng& rng, const GenConfig& cfg);
int gen_key(Rng& rng, const GenConfig& cfg);
int gen_value(Rng& rng);

enum class StrategyKind { Bespoke, TypeBased };

class UnknownStrategy : public std::invalid_argument {
 public:
  explicit UnknownStrategy(const std::string& name) : std::invalid_argument("unknown strategy '" + name + "'") {}
};

/// Built-in strategy names: "bespoke" and "typebased".
StrategyKind parse_strategy(std::string_view name);
std::vector<std::string> builtin_strategies();

/// Generates the i-th input of a run: input i draws from rng.split(i) and
/// argument j from rng.split(i).split(j).
using InputGenerator = std::function<workloads::Input(const Rng& root, std::uint64_t index, const GenConfig& cfg)>;

InputGenerator make_generator(StrategyKind kind, const workloads::Signature& sig);

}  // namespace pbtbench::harness
