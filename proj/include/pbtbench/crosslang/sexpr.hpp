#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pbtbench::crosslang {

/// An S-expression: a non-empty atom or a (possibly empty) list.
class SExpr {
 public:
  static SExpr atom(std::string text);
  static SExpr list(std::vector<SExpr> items = {});

  bool is_atom() const noexcept { return is_atom_; }
  const std::string& text() const;
  const std::vector<SExpr>& items() const;

  friend bool operator==(const SExpr&, const SExpr&) = default;

 private:
  bool is_atom_ = false;
  std::string text_;
  std::vector<SExpr> items_;
};

enum class SExprErrorKind { EmptyInput, UnbalancedParens, BadEscape, UnterminatedString, TrailingInput };

class SExprError : public std::runtime_error {
 public:
  SExprError(SExprErrorKind kind, std::size_t offset, const std::string& detail);

  SExprErrorKind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  SExprErrorKind kind_;
  std::size_t offset_;
};

/// Canonical printing: atoms bare unless they need quoting, list items
/// separated by a single space.
std::string print(const SExpr& e);

/// Parses exactly one S-expression; surrounding whitespace is allowed,
/// anything else after it is rejected.
SExpr parse_sexpr(std::string_view text);

}  // namespace pbtbench::crosslang
