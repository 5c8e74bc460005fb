#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pbtbench::bst {

struct Node;

/// Persistent binary tree with integer keys and values. An empty tree is a leaf.
class Tree {
 public:
  Tree() = default;

  static Tree node(Tree left, int key, int value, Tree right);

  bool empty() const noexcept { return node_ == nullptr; }
  const Node& operator*() const noexcept { return *node_; }
  const Node* operator->() const noexcept { return node_.get(); }

  friend bool operator==(const Tree& a, const Tree& b) noexcept;

 private:
  std::shared_ptr<const Node> node_;
};

struct Node {
  Tree left;
  int key;
  int value;
  Tree right;
};

inline Tree Tree::node(Tree left, int key, int value, Tree right) {
  Tree t;
  t.node_ = std::make_shared<const Node>(Node{std::move(left), key, value, std::move(right)});
  return t;
}

using Binding = std::pair<int, int>;
using Bindings = std::vector<Binding>;

/// Strict search-tree order over the whole tree, not just parent/child pairs.
bool is_bst(const Tree& t);
std::optional<int> find(int key, const Tree& t);
Bindings to_list(const Tree& t);
std::size_t size(const Tree& t);
std::size_t depth(const Tree& t);
std::vector<int> keys(const Tree& t);

/// The implementation under test; each built variant supplies one of these.
struct Ops {
  Tree (*insert)(int key, int value, const Tree& t);
  Tree (*remove)(int key, const Tree& t);
  Tree (*unite)(const Tree& a, const Tree& b);
};

/// Known-good operations, independent of the mutable workload sources.
/// Generators build inputs with these so a mutant can never corrupt them.
namespace reference {
Tree insert(int key, int value, const Tree& t);
Tree remove(int key, const Tree& t);
Tree unite(const Tree& a, const Tree& b);
Ops ops();
}  // namespace reference

/// Sorted association list model.
namespace model {
Bindings insert(int key, int value, Bindings m);
Bindings remove(int key, Bindings m);
Bindings unite(const Bindings& a, const Bindings& b);
}  // namespace model

}  // namespace pbtbench::bst
