#include "pbtbench/workloads/bst.hpp"

#include <algorithm>
#include <limits>

namespace pbtbench::bst {

bool operator==(const Tree& a, const Tree& b) noexcept {
  if (a.node_ == b.node_) return true;
  if (a.empty() || b.empty()) return false;
  return a->key == b->key && a->value == b->value && a->left == b->left && a->right == b->right;
}

namespace {

// Keys of t must lie strictly inside (lo, hi); nullopt bounds are open.
bool ordered_within(const Tree& t, std::optional<int> lo, std::optional<int> hi) {
  if (t.empty()) return true;
  if ((lo && t->key <= *lo) || (hi && t->key >= *hi)) return false;
  return ordered_within(t->left, lo, t->key) && ordered_within(t->right, t->key, hi);
}

void collect(const Tree& t, Bindings& out) {
  if (t.empty()) return;
  collect(t->left, out);
  out.emplace_back(t->key, t->value);
  collect(t->right, out);
}

}  // namespace

bool is_bst(const Tree& t) { return ordered_within(t, std::nullopt, std::nullopt); }

std::optional<int> find(int key, const Tree& t) {
  const Tree* cur = &t;
  while (!cur->empty()) {
    const Node& n = **cur;
    if (key < n.key) {
      cur = &n.left;
    } else if (key > n.key) {
      cur = &n.right;
    } else {
      return n.value;
    }
  }
  return std::nullopt;
}

Bindings to_list(const Tree& t) {
  Bindings out;
  collect(t, out);
  return out;
}

std::size_t size(const Tree& t) { return t.empty() ? 0 : 1 + size(t->left) + size(t->right); }

std::size_t depth(const Tree& t) { return t.empty() ? 0 : 1 + std::max(depth(t->left), depth(t->right)); }

std::vector<int> keys(const Tree& t) {
  std::vector<int> out;
  for (const auto& [k, v] : to_list(t)) out.push_back(k);
  return out;
}

namespace reference {

Tree insert(int key, int value, const Tree& t) {
  if (t.empty()) return Tree::node({}, key, value, {});
  const Node& n = *t;
  if (key < n.key) return Tree::node(insert(key, value, n.left), n.key, n.value, n.right);
  if (key > n.key) return Tree::node(n.left, n.key, n.value, insert(key, value, n.right));
  return Tree::node(n.left, key, value, n.right);
}

namespace {

Tree join(const Tree& a, const Tree& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return Tree::node(a->left, a->key, a->value, Tree::node(join(a->right, b->left), b->key, b->value, b->right));
}

Tree below(int key, const Tree& t) {
  if (t.empty()) return t;
  if (key <= t->key) return below(key, t->left);
  return Tree::node(t->left, t->key, t->value, below(key, t->right));
}

Tree above(int key, const Tree& t) {
  if (t.empty()) return t;
  if (key >= t->key) return above(key, t->right);
  return Tree::node(above(key, t->left), t->key, t->value, t->right);
}

}  // namespace

Tree remove(int key, const Tree& t) {
  if (t.empty()) return t;
  const Node& n = *t;
  if (key < n.key) return Tree::node(remove(key, n.left), n.key, n.value, n.right);
  if (key > n.key) return Tree::node(n.left, n.key, n.value, remove(key, n.right));
  return join(n.left, n.right);
}

Tree unite(const Tree& a, const Tree& b) {
  if (a.empty()) return b;
  const Node& n = *a;
  return Tree::node(unite(n.left, below(n.key, b)), n.key, n.value, unite(n.right, above(n.key, b)));
}

Ops ops() { return {&insert, &remove, &unite}; }

}  // namespace reference

namespace model {

Bindings insert(int key, int value, Bindings m) {
  auto it = std::lower_bound(m.begin(), m.end(), key, [](const Binding& b, int k) { return b.first < k; });
  if (it != m.end() && it->first == key) {
    it->second = value;
  } else {
    m.insert(it, {key, value});
  }
  return m;
}

Bindings remove(int key, Bindings m) {
  std::erase_if(m, [&](const Binding& b) { return b.first == key; });
  return m;
}

Bindings unite(const Bindings& a, const Bindings& b) {
  Bindings out = a;
  for (const auto& [k, v] : b) {
    if (std::none_of(a.begin(), a.end(), [&](const Binding& x) { return x.first == k; })) {
      out = insert(k, v, std::move(out));
    }
  }
  return out;
}

}  // namespace model

}  // namespace pbtbench::bst
