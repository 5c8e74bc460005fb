#include "pbtbench/harness/generators.hpp"

#include <algorithm>

namespace pbtbench::harness {

using workloads::ArgKind;

void GenConfig::validate() const {
  if (size < 0) throw std::invalid_argument("size must be >= 0");
  if (max_tests < 1) throw std::invalid_argument("max_tests must be >= 1");
  if (max_discards < 1) throw std::invalid_argument("max_discards must be >= 1");
}

int gen_key(Rng& rng, const GenConfig& cfg) { return rng.uniform(cfg.key_lo(), cfg.key_hi()); }

int gen_value(Rng& rng) { return rng.uniform(0, kValueMax); }

namespace {

bst::Tree typebased_bst(Rng& rng, const GenConfig& cfg, int size) {
  if (size <= 0 || rng.coin()) return {};
  auto left = typebased_bst(rng, cfg, size - 1);
  const int k = gen_key(rng, cfg);
  const int v = gen_value(rng);
  auto right = typebased_bst(rng, cfg, size - 1);
  return bst::Tree::node(std::move(left), k, v, std::move(right));
}

rbt::Tree typebased_rbt(Rng& rng, const GenConfig& cfg, int size) {
  if (size <= 0 || rng.coin()) return {};
  const auto color = rng.coin() ? rbt::Color::Red : rbt::Color::Black;
  auto left = typebased_rbt(rng, cfg, size - 1);
  const int k = gen_key(rng, cfg);
  const int v = gen_value(rng);
  auto right = typebased_rbt(rng, cfg, size - 1);
  return rbt::Tree::node(color, std::move(left), k, v, std::move(right));
}

}  // namespace

bst::Tree gen_tree_typebased(Rng& rng, const GenConfig& cfg) { return typebased_bst(rng, cfg, cfg.size); }

rbt::Tree gen_rbt_typebased(Rng& rng, const GenConfig& cfg) { return typebased_rbt(rng, cfg, cfg.size); }

bst::Tree gen_bst_bespoke(Rng& rng, const GenConfig& cfg) {
  const int n = rng.uniform(0, std::max(cfg.size, 0));
  bst::Tree t;
  for (int i = 0; i < n; ++i) {
    const int k = gen_key(rng, cfg);
    t = bst::reference::insert(k, gen_value(rng), t);
  }
  return t;
}

rbt::Tree gen_rbt_bespoke(Rng& rng, const GenConfig& cfg) {
  const int n = rng.uniform(0, std::max(cfg.size, 0));
  rbt::Tree t;
  for (int i = 0; i < n; ++i) {
    const int k = gen_key(rng, cfg);
    t = rbt::reference::insert(k, gen_value(rng), t);
  }
  return t;
}

StrategyKind parse_strategy(std::string_view name) {
  if (name == "bespoke") return StrategyKind::Bespoke;
  if (name == "typebased") return StrategyKind::TypeBased;
  throw UnknownStrategy(std::string(name));
}

std::vector<std::string> builtin_strategies() { return {"bespoke", "typebased"}; }

InputGenerator make_generator(StrategyKind kind, const workloads::Signature& sig) {
  return [kind, sig](const Rng& root, std::uint64_t index, const GenConfig& base) {
    GenConfig cfg = base;
    if (cfg.ramp) cfg.size = static_cast<int>(index % static_cast<std::uint64_t>(base.size + 1));
    const Rng input_rng = root.split(index);
    workloads::Input in;
    in.reserve(sig.size());
    for (std::size_t j = 0; j < sig.size(); ++j) {
      Rng rng = input_rng.split(j);
      switch (sig[j]) {
        case ArgKind::BstTree:
          in.emplace_back(kind == StrategyKind::Bespoke ? gen_bst_bespoke(rng, cfg) : gen_tree_typebased(rng, cfg));
          break;
        case ArgKind::RbtTree:
          in.emplace_back(kind == StrategyKind::Bespoke ? gen_rbt_bespoke(rng, cfg) : gen_rbt_typebased(rng, cfg));
          break;
        case ArgKind::Key: in.emplace_back(gen_key(rng, cfg)); break;
        case ArgKind::Value: in.emplace_back(gen_value(rng)); break;
      }
    }
    return in;
  };
}

}  // namespace pbtbench::harness
