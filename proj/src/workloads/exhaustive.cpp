#include "pbtbench/workloads/exhaustive.hpp"

namespace pbtbench::workloads {

namespace {

// Every search tree over keys in [lo, hi] with at most `nodes` nodes.
std::vector<bst::Tree> bsts_between(int lo, int hi, int nodes, const SmallSpace& s) {
  std::vector<bst::Tree> out{bst::Tree{}};
  if (nodes <= 0) return out;
  for (int k = lo; k <= hi; ++k) {
    for (int left_nodes = 0; left_nodes < nodes; ++left_nodes) {
      // Trees with exactly `left_nodes` on the left are drawn from the
      // at-most lists by filtering on size.
      const auto lefts = bsts_between(lo, k - 1, left_nodes, s);
      const auto rights = bsts_between(k + 1, hi, nodes - 1 - left_nodes, s);
      for (const auto& l : lefts) {
        if (static_cast<int>(bst::size(l)) != left_nodes) continue;
        for (const auto& r : rights) {
          for (int v = s.value_lo; v <= s.value_hi; ++v) out.push_back(bst::Tree::node(l, k, v, r));
        }
      }
    }
  }
  return out;
}

std::vector<rbt::Tree> colorings(const bst::Tree& t) {
  if (t.empty()) return {rbt::Tree{}};
  std::vector<rbt::Tree> out;
  const auto ls = colorings(t->left);
  const auto rs = colorings(t->right);
  for (auto c : {rbt::Color::Red, rbt::Color::Black}) {
    for (const auto& l : ls) {
      for (const auto& r : rs) out.push_back(rbt::Tree::node(c, l, t->key, t->value, r));
    }
  }
  return out;
}

}  // namespace

std::vector<bst::Tree> all_bsts(const SmallSpace& space) {
  return bsts_between(space.key_lo, space.key_hi, space.max_nodes, space);
}

std::vector<rbt::Tree> all_rbts(const SmallSpace& space) {
  std::vector<rbt::Tree> out;
  for (const auto& t : all_bsts(space)) {
    for (auto& c : colorings(t)) {
      if (rbt::is_rbt(c)) out.push_back(std::move(c));
    }
  }
  return out;
}

void for_each_input(const Signature& sig, const SmallSpace& space,
                    const std::function<bool(const Input&)>& visit) {
  std::vector<std::vector<Arg>> domains;
  std::optional<std::vector<Arg>> bst_domain, rbt_domain;
  for (auto kind : sig) {
    std::vector<Arg> d;
    switch (kind) {
      case ArgKind::BstTree:
        if (!bst_domain) {
          bst_domain.emplace();
          for (auto& t : all_bsts(space)) bst_domain->emplace_back(std::move(t));
        }
        d = *bst_domain;
        break;
      case ArgKind::RbtTree:
        if (!rbt_domain) {
          rbt_domain.emplace();
          for (auto& t : all_rbts(space)) rbt_domain->emplace_back(std::move(t));
        }
        d = *rbt_domain;
        break;
      case ArgKind::Key:
        for (int k = space.key_lo; k <= space.key_hi; ++k) d.emplace_back(k);
        break;
      case ArgKind::Value:
        for (int v = space.value_lo; v <= space.value_hi; ++v) d.emplace_back(v);
        break;
    }
    domains.push_back(std::move(d));
  }

  // Odometer over the cartesian product.
  std::vector<std::size_t> idx(sig.size(), 0);
  Input input(sig.size());
  for (std::size_t j = 0; j < sig.size(); ++j) {
    if (domains[j].empty()) return;
    input[j] = domains[j][0];
  }
  while (true) {
    if (!visit(input)) return;
    std::size_t j = sig.size();
    while (j > 0) {
      --j;
      if (++idx[j] < domains[j].size()) {
        input[j] = domains[j][idx[j]];
        break;
      }
      idx[j] = 0;
      input[j] = domains[j][0];
      if (j == 0) return;
    }
    if (sig.empty()) return;
  }
}

std::optional<Input> find_failure(const Workload& wl, std::string_view property, const SmallSpace& space) {
  const auto& spec = wl.property(property);
  const auto eval = wl.evaluator(property);
  std::optional<Input> found;
  for_each_input(spec.signature, space, [&](const Input& in) {
    if (eval(in) != Verdict::Fail) return true;
    found = in;
    return false;
  });
  return found;
}

}  // namespace pbtbench::workloads
