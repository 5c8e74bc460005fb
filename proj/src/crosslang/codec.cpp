#include "pbtbench/crosslang/codec.hpp"

#include <charconv>

namespace pbtbench::crosslang {

using workloads::ArgKind;

namespace {

SExpr int_atom(int v) { return SExpr::atom(std::to_string(v)); }

[[noreturn]] void mismatch(const std::string& what, const SExpr& got) {
  throw SignatureMismatch("expected " + what + ", got " + print(got));
}

int decode_int(const SExpr& e) {
  if (!e.is_atom()) mismatch("an integer", e);
  const auto& t = e.text();
  int v = 0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || end != t.data() + t.size()) mismatch("an integer", e);
  return v;
}

bool is_leaf(const SExpr& e) { return e.is_atom() && e.text() == "E"; }

// Trees are decoded with an explicit stack: serialized inputs come from
// outside the process and may be arbitrarily deep.
template <typename Tree, typename MakeNode>
Tree decode_tree(const SExpr& root, std::size_t header, MakeNode make) {
  struct Frame {
    const SExpr* e;
    bool expanded;
  };
  std::vector<Frame> work{{&root, false}};
  std::vector<Tree> built;
  while (!work.empty()) {
    Frame f = work.back();
    work.pop_back();
    if (is_leaf(*f.e)) {
      built.emplace_back();
      continue;
    }
    const auto& e = *f.e;
    if (e.is_atom() || e.items().size() != header + 4 || !e.items()[0].is_atom() || e.items()[0].text() != "T") {
      mismatch(header == 2 ? "E or (T R|B <left> <key> <value> <right>)" : "E or (T <left> <key> <value> <right>)", e);
    }
    const auto& items = e.items();
    if (!f.expanded) {
      work.push_back({f.e, true});
      work.push_back({&items[header + 3], false});
      work.push_back({&items[header], false});
      continue;
    }
    Tree right = std::move(built.back());
    built.pop_back();
    Tree left = std::move(built.back());
    built.pop_back();
    built.push_back(make(items, std::move(left), decode_int(items[header + 1]), decode_int(items[header + 2]),
                         std::move(right)));
  }
  return std::move(built.back());
}

template <typename Tree, typename Head>
SExpr encode_tree(const Tree& t, Head head) {
  if (t.empty()) return SExpr::atom("E");
  std::vector<SExpr> items{SExpr::atom("T")};
  head(*t, items);
  items.push_back(encode_tree(t->left, head));
  items.push_back(int_atom(t->key));
  items.push_back(int_atom(t->value));
  items.push_back(encode_tree(t->right, head));
  return SExpr::list(std::move(items));
}

}  // namespace

SExpr encode(const bst::Tree& t) {
  return encode_tree(t, [](const bst::Node&, std::vector<SExpr>&) {});
}

SExpr encode(const rbt::Tree& t) {
  return encode_tree(t, [](const rbt::Node& n, std::vector<SExpr>& items) {
    items.push_back(SExpr::atom(n.color == rbt::Color::Red ? "R" : "B"));
  });
}

SExpr encode(const workloads::Input& input, const workloads::Signature& sig) {
  if (input.size() != sig.size()) {
    throw UnregisteredType("input has " + std::to_string(input.size()) + " arguments, signature has " +
                           std::to_string(sig.size()));
  }
  std::vector<SExpr> items;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    const auto& arg = input[i];
    switch (sig[i]) {
      case ArgKind::BstTree:
        if (!std::holds_alternative<bst::Tree>(arg)) throw UnregisteredType("argument " + std::to_string(i));
        items.push_back(encode(std::get<bst::Tree>(arg)));
        break;
      case ArgKind::RbtTree:
        if (!std::holds_alternative<rbt::Tree>(arg)) throw UnregisteredType("argument " + std::to_string(i));
        items.push_back(encode(std::get<rbt::Tree>(arg)));
        break;
      case ArgKind::Key:
      case ArgKind::Value:
        if (!std::holds_alternative<int>(arg)) throw UnregisteredType("argument " + std::to_string(i));
        items.push_back(int_atom(std::get<int>(arg)));
        break;
    }
  }
  return SExpr::list(std::move(items));
}

std::string serialize_input(const workloads::Input& input, const workloads::Signature& sig) {
  return print(encode(input, sig));
}

bst::Tree decode_bst(const SExpr& e) {
  return decode_tree<bst::Tree>(e, 1, [](const std::vector<SExpr>&, bst::Tree l, int k, int v, bst::Tree r) {
    return bst::Tree::node(std::move(l), k, v, std::move(r));
  });
}

rbt::Tree decode_rbt(const SExpr& e) {
  return decode_tree<rbt::Tree>(e, 2, [](const std::vector<SExpr>& items, rbt::Tree l, int k, int v, rbt::Tree r) {
    const SExpr& c = items[1];
    if (!c.is_atom() || (c.text() != "R" && c.text() != "B")) mismatch("color R or B", c);
    return rbt::Tree::node(c.text() == "R" ? rbt::Color::Red : rbt::Color::Black, std::move(l), k, v, std::move(r));
  });
}

workloads::Input decode(const SExpr& e, const workloads::Signature& sig) {
  if (e.is_atom() || e.items().size() != sig.size()) {
    mismatch("a tuple of " + std::to_string(sig.size()) + " arguments", e);
  }
  workloads::Input out;
  out.reserve(sig.size());
  for (std::size_t i = 0; i < sig.size(); ++i) {
    const auto& item = e.items()[i];
    switch (sig[i]) {
      case ArgKind::BstTree: out.emplace_back(decode_bst(item)); break;
      case ArgKind::RbtTree: out.emplace_back(decode_rbt(item)); break;
      case ArgKind::Key:
      case ArgKind::Value: out.emplace_back(decode_int(item)); break;
    }
  }
  return out;
}

workloads::Input deserialize_input(std::string_view text, const workloads::Signature& sig) {
  return decode(parse_sexpr(text), sig);
}

}  // namespace pbtbench::crosslang
