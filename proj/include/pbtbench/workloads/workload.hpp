#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pbtbench/workloads/bst.hpp"
#include "pbtbench/workloads/rbt.hpp"

namespace pbtbench::workloads {

enum class ArgKind { BstTree, RbtTree, Key, Value };

/// One property argument. Keys and values are both plain integers; the
/// signature says which is which.
using Arg = std::variant<int, bst::Tree, rbt::Tree>;
using Input = std::vector<Arg>;
using Signature = std::vector<ArgKind>;

enum class Verdict { Pass, Fail, Discard };

std::string_view to_string(Verdict v) noexcept;

struct PropertySpec {
  std::string name;
  Signature signature;
};

class UnknownProperty : public std::invalid_argument {
 public:
  explicit UnknownProperty(const std::string& name) : std::invalid_argument("UnknownProperty: " + name) {}
};

using Evaluator = std::function<Verdict(const Input&)>;

/// A built-in workload bound to one implementation variant.
class Workload {
 public:
  virtual ~Workload() = default;

  virtual std::string_view name() const noexcept = 0;
  virtual const std::vector<PropertySpec>& properties() const noexcept = 0;
  virtual Evaluator evaluator(std::string_view property) const = 0;

  const PropertySpec& property(std::string_view name) const;
  Verdict evaluate(std::string_view property, const Input& input) const { return evaluator(property)(input); }
};

std::unique_ptr<Workload> make_bst(bst::Ops ops);
std::unique_ptr<Workload> make_rbt(rbt::Ops ops);

}  // namespace pbtbench::workloads
