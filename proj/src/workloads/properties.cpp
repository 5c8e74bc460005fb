#include <algorithm>

#include "pbtbench/workloads/workload.hpp"

namespace pbtbench::workloads {

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Discard: return "discard";
  }
  return "?";
}

const PropertySpec& Workload::property(std::string_view name) const {
  const auto& props = properties();
  const auto it = std::find_if(props.begin(), props.end(), [&](const PropertySpec& p) { return p.name == name; });
  if (it == props.end()) throw UnknownProperty(std::string(name));
  return *it;
}

namespace {

inline Verdict check(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

int key(const Input& in, std::size_t i) { return std::get<int>(in[i]); }

class BstWorkload final : public Workload {
 public:
  explicit BstWorkload(bst::Ops ops) : ops_(ops) {}

  std::string_view name() const noexcept override { return "bst"; }

  const std::vector<PropertySpec>& properties() const noexcept override {
    using enum ArgKind;
    static const std::vector<PropertySpec> specs = {
        {"InsertValid", {BstTree, Key, Value}},
        {"DeleteValid", {BstTree, Key}},
        {"UnionValid", {BstTree, BstTree}},
        {"InsertPost", {BstTree, Key, Key, Value}},
        {"DeletePost", {BstTree, Key, Key}},
        {"UnionPost", {BstTree, BstTree, Key}},
        {"InsertModel", {BstTree, Key, Value}},
        {"DeleteDeleteOrder", {BstTree, Key, Key}},
    };
    return specs;
  }

  Evaluator evaluator(std::string_view property) const override {
    const bst::Ops o = ops_;
    auto tree = [](const Input& in, std::size_t i) -> const bst::Tree& { return std::get<bst::Tree>(in[i]); };

    if (property == "InsertValid") {
      return [=](const Input& in) {
        const auto& t = tree(in, 0);
        if (!bst::is_bst(t)) return Verdict::Discard;
        return check(bst::is_bst(o.insert(key(in, 1), key(in, 2), t)));
      };
    }
    if (property == "DeleteValid") {
      return [=](const Input& in) {
        const auto& t = tree(in, 0);
        if (!bst::is_bst(t)) return Verdict::Discard;
        return check(bst::is_bst(o.remove(key(in, 1), t)));
      };
    }
    if (property == "UnionValid") {
      return [=](const Input& in) {
        const auto& a = tree(in, 0);
        const auto& b = tree(in, 1);
        if (!bst::is_bst(a) || !bst::is_bst(b)) return Verdict::Discard;
        return check(bst::is_bst(o.unite(a, b)));
      };
    }
    if (property == "InsertPost") {
      return [=](const Input& in) {
        const auto& t = tree(in, 0);
        if (!bst::is_bst(t)) return Verdict::Discard;
        const int k = key(in, 1), k2 = key(in, 2), v = key(in, 3);
        const auto expected = k == k2 ? std::optional<int>(v) : bst::find(k2, t);
        return check(bst::find(k2, o.insert(k, v, t)) == expected);
      };
    }
    if (property == "DeletePost") {
      return [=](const Input& in) {
        const auto& t = tree(in, 0);
        if (!bst::is_bst(t)) return Verdict::Discard;
        const int k = key(in, 1), k2 = key(in, 2);
        const auto expected = k == k2 ? std::nullopt : bst::find(k2, t);
        return check(bst::find(k2, o.remove(k, t)) == expected);
      };
    }
    if (property == "UnionPost") {
      return [=](const Input& in) {
        const auto& a = tree(in, 0);
        const auto& b = tree(in, 1);
        if (!bst::is_bst(a) || !bst::is_bst(b)) return Verdict::Discard;
        const int k = key(in, 2);
        auto expected = bst::find(k, a);
        if (!expected) expected = bst::find(k, b);
        return check(bst::find(k, o.unite(a, b)) == expected);
      };
    }
    if (property == "InsertModel") {
      return [=](const Input& in) {
        const auto& t = tree(in, 0);
        if (!bst::is_bst(t)) return Verdict::Discard;
        const int k = key(in, 1), v = key(in, 2);
        return check(bst::to_list(o.insert(k, v, t)) == bst::model::insert(k, v, bst::to_list(t)));
      };
    }
    if (property == "DeleteDeleteOrder") {
      return [=](const Input& in) {
        const auto& t = tree(in, 0);
        if (!bst::is_bst(t)) return Verdict::Discard;
        const int k = key(in, 1), k2 = key(in, 2);
        return check(bst::to_list(o.remove(k, o.remove(k2, t))) == bst::to_list(o.remove(k2, o.remove(k, t))));
      };
    }
    throw UnknownProperty(std::string(property));
  }

 private:
  bst::Ops ops_;
};

class RbtWorkload final : public Workload {
 public:
  explicit RbtWorkload(rbt::Ops ops) : ops_(ops) {}

  std::string_view name() const noexcept override { return "rbt"; }

  const std::vector<PropertySpec>& properties() const noexcept override {
    using enum ArgKind;
    static const std::vector<PropertySpec> specs = {
        {"InsertValidRBT", {RbtTree, Key, Value}},
        {"DeleteValidRBT", {RbtTree, Key}},
        {"InsertPostRBT", {RbtTree, Key, Key, Value}},
    };
    return specs;
  }

  Evaluator evaluator(std::string_view property) const override {
    const rbt::Ops o = ops_;
    auto tree = [](const Input& in, std::size_t i) -> const rbt::Tree& { return std::get<rbt::Tree>(in[i]); };

    if (property == "InsertValidRBT") {
      return [=](const Input& in) {
        const auto& t = tree(in, 0);
        if (!rbt::is_rbt(t)) return Verdict::Discard;
        return check(rbt::is_rbt(o.insert(key(in, 1), key(in, 2), t)));
      };
    }
    if (property == "DeleteValidRBT") {
      return [=](const Input& in) {
        const auto& t = tree(in, 0);
        if (!rbt::is_rbt(t)) return Verdict::Discard;
        return check(rbt::is_rbt(o.remove(key(in, 1), t)));
      };
    }
    if (property == "InsertPostRBT") {
      return [=](const Input& in) {
        const auto& t = tree(in, 0);
        if (!rbt::is_rbt(t)) return Verdict::Discard;
        const int k = key(in, 1), k2 = key(in, 2), v = key(in, 3);
        const auto expected = k == k2 ? std::optional<int>(v) : rbt::find(k2, t);
        return check(rbt::find(k2, o.insert(k, v, t)) == expected);
      };
    }
    throw UnknownProperty(std::string(property));
  }

 private:
  rbt::Ops ops_;
};

}  // namespace

std::unique_ptr<Workload> make_bst(bst::Ops ops) { return std::make_unique<BstWorkload>(ops); }
std::unique_ptr<Workload> make_rbt(rbt::Ops ops) { return std::make_unique<RbtWorkload>(ops); }

}  // namespace pbtbench::workloads
