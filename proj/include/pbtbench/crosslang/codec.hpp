#pragma once

// Canonical S-expression encoding of workload inputs:
//   tree         E | (T <left> <key> <value> <right>)
//   colored tree E | (T R|B <left> <key> <value> <right>)
//   integer      decimal atom
//   input tuple  (<arg1> <arg2> ...)

#include <stdexcept>
#include <string>
#include <string_view>

#include "pbtbench/crosslang/sexpr.hpp"
#include "pbtbench/workloads/workload.hpp"

namespace pbtbench::crosslang {

/// Version tag written in corpus headers; bump when the encoding changes.
inline constexpr std::string_view kEncodingVersion = "pbtbench-sexpr-1";

class SignatureMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnregisteredType : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

SExpr encode(const bst::Tree& t);
SExpr encode(const rbt::Tree& t);
SExpr encode(const workloads::Input& input, const workloads::Signature& sig);

std::string serialize_input(const workloads::Input& input, const workloads::Signature& sig);

bst::Tree decode_bst(const SExpr& e);
rbt::Tree decode_rbt(const SExpr& e);
workloads::Input decode(const SExpr& e, const workloads::Signature& sig);

/// Parses and decodes one serialized input.
workloads::Input deserialize_input(std::string_view text, const workloads::Signature& sig);

}  // namespace pbtbench::crosslang
