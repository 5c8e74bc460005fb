#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace pbtbench::rbt {

enum class Color : unsigned char { Red, Black };

struct Node;

/// Persistent red-black tree node structure. No invariant is enforced by the
/// type; `is_rbt` is the semantic predicate.
class Tree {
 public:
  Tree() = default;

  static Tree node(Color color, Tree left, int key, int value, Tree right);

  bool empty() const noexcept { return node_ == nullptr; }
  const Node& operator*() const noexcept { return *node_; }
  const Node* operator->() const noexcept { return node_.get(); }

  friend bool operator==(const Tree& a, const Tree& b) noexcept;

 private:
  std::shared_ptr<const Node> node_;
};

struct Node {
  Color color;
  Tree left;
  int key;
  int value;
  Tree right;
};

inline Tree Tree::node(Color color, Tree left, int key, int value, Tree right) {
  Tree t;
  t.node_ = std::make_shared<const Node>(Node{color, std::move(left), key, value, std::move(right)});
  return t;
}

inline bool is_red(const Tree& t) noexcept { return !t.empty() && t->color == Color::Red; }
inline bool is_black_node(const Tree& t) noexcept { return !t.empty() && t->color == Color::Black; }

struct Validity {
  bool ordered = true;
  bool no_red_red = true;
  bool balanced = true;

  bool ok() const noexcept { return ordered && no_red_red && balanced; }
};

Validity check(const Tree& t);
inline bool is_rbt(const Tree& t) { return check(t).ok(); }

/// Number of black nodes on the leftmost path (leaves not counted).
std::size_t black_height(const Tree& t);
std::optional<int> find(int key, const Tree& t);
std::vector<std::pair<int, int>> to_list(const Tree& t);
std::size_t size(const Tree& t);

struct Ops {
  Tree (*insert)(int key, int value, const Tree& t);
  Tree (*remove)(int key, const Tree& t);
};

namespace reference {
Tree insert(int key, int value, const Tree& t);
}  // namespace reference

}  // namespace pbtbench::rbt
