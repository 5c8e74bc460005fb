#include "pbtbench/workloads/rbt.hpp"

#include <algorithm>

namespace pbtbench::rbt {

bool operator==(const Tree& a, const Tree& b) noexcept {
  if (a.node_ == b.node_) return true;
  if (a.empty() || b.empty()) return false;
  return a->color == b->color && a->key == b->key && a->value == b->value && a->left == b->left &&
         a->right == b->right;
}

namespace {

bool ordered_within(const Tree& t, std::optional<int> lo, std::optional<int> hi) {
  if (t.empty()) return true;
  if ((lo && t->key <= *lo) || (hi && t->key >= *hi)) return false;
  return ordered_within(t->left, lo, t->key) && ordered_within(t->right, t->key, hi);
}

bool no_red_red(const Tree& t) {
  if (t.empty()) return true;
  if (t->color == Color::Red && (is_red(t->left) || is_red(t->right))) return false;
  return no_red_red(t->left) && no_red_red(t->right);
}

// Black height if consistent on every path, otherwise nullopt.
std::optional<std::size_t> consistent_height(const Tree& t) {
  if (t.empty()) return 0;
  const auto l = consistent_height(t->left);
  const auto r = consistent_height(t->right);
  if (!l || !r || *l != *r) return std::nullopt;
  return *l + (t->color == Color::Black ? 1 : 0);
}

void collect(const Tree& t, std::vector<std::pair<int, int>>& out) {
  if (t.empty()) return;
  collect(t->left, out);
  out.emplace_back(t->key, t->value);
  collect(t->right, out);
}

}  // namespace

Validity check(const Tree& t) {
  return {ordered_within(t, std::nullopt, std::nullopt), no_red_red(t), consistent_height(t).has_value()};
}

std::size_t black_height(const Tree& t) {
  std::size_t h = 0;
  for (const Tree* cur = &t; !cur->empty(); cur = &(*cur)->left) {
    if ((*cur)->color == Color::Black) ++h;
  }
  return h;
}

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

std::vector<std::pair<int, int>> to_list(const Tree& t) {
  std::vector<std::pair<int, int>> out;
  collect(t, out);
  return out;
}

std::size_t size(const Tree& t) { return t.empty() ? 0 : 1 + size(t->left) + size(t->right); }

namespace reference {

namespace {

Tree balance(Color c, const Tree& l, int k, int v, const Tree& r) {
  constexpr auto R = Color::Red;
  constexpr auto B = Color::Black;
  if (c == B) {
    if (is_red(l) && is_red(l->left)) {
      const Node& y = *l;
      const Node& x = *l->left;
      return Tree::node(R, Tree::node(B, x.left, x.key, x.value, x.right), y.key, y.value,
                        Tree::node(B, y.right, k, v, r));
    }
    if (is_red(l) && is_red(l->right)) {
      const Node& x = *l;
      const Node& y = *l->right;
      return Tree::node(R, Tree::node(B, x.left, x.key, x.value, y.left), y.key, y.value,
                        Tree::node(B, y.right, k, v, r));
    }
    if (is_red(r) && is_red(r->left)) {
      const Node& z = *r;
      const Node& y = *r->left;
      return Tree::node(R, Tree::node(B, l, k, v, y.left), y.key, y.value,
                        Tree::node(B, y.right, z.key, z.value, z.right));
    }
    if (is_red(r) && is_red(r->right)) {
      const Node& y = *r;
      const Node& z = *r->right;
      return Tree::node(R, Tree::node(B, l, k, v, y.left), y.key, y.value,
                        Tree::node(B, z.left, z.key, z.value, z.right));
    }
  }
  return Tree::node(c, l, k, v, r);
}

Tree ins(int k, int v, const Tree& t) {
  if (t.empty()) return Tree::node(Color::Red, {}, k, v, {});
  const Node& n = *t;
  if (k < n.key) return balance(n.color, ins(k, v, n.left), n.key, n.value, n.right);
  if (k > n.key) return balance(n.color, n.left, n.key, n.value, ins(k, v, n.right));
  return Tree::node(n.color, n.left, k, v, n.right);
}

}  // namespace

Tree insert(int key, int value, const Tree& t) {
  const Tree r = ins(key, value, t);
  return Tree::node(Color::Black, r->left, r->key, r->value, r->right);
}

}  // namespace reference

}  // namespace pbtbench::rbt
