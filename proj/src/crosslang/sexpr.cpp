#include "pbtbench/crosslang/sexpr.hpp"

#include <algorithm>
#include <optional>

namespace pbtbench::crosslang {

namespace {

bool is_space(char c) noexcept { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool needs_quoting(std::string_view s) noexcept {
  return s.empty() || std::any_of(s.begin(), s.end(), [](char c) {
           return is_space(c) || c == '(' || c == ')' || c == '"' || c == '\\';
         });
}

std::string_view kind_name(SExprErrorKind k) noexcept {
  switch (k) {
    case SExprErrorKind::EmptyInput: return "EmptyInput";
    case SExprErrorKind::UnbalancedParens: return "UnbalancedParens";
    case SExprErrorKind::BadEscape: return "BadEscape";
    case SExprErrorKind::UnterminatedString: return "UnterminatedString";
    case SExprErrorKind::TrailingInput: return "TrailingInput";
  }
  return "?";
}

void print_to(const SExpr& e, std::string& out) {
  if (e.is_atom()) {
    const auto& t = e.text();
    if (!needs_quoting(t)) {
      out += t;
      return;
    }
    out += '"';
    for (char c : t) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default: out += c;
      }
    }
    out += '"';
    return;
  }
  out += '(';
  bool first = true;
  for (const auto& item : e.items()) {
    if (!first) out += ' ';
    first = false;
    print_to(item, out);
  }
  out += ')';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  SExpr parse_all() {
    skip_ws();
    if (pos_ == text_.size()) throw SExprError(SExprErrorKind::EmptyInput, pos_, "no expression");
    SExpr e = parse_one();
    skip_ws();
    if (pos_ != text_.size()) {
      if (text_[pos_] == ')') throw SExprError(SExprErrorKind::UnbalancedParens, pos_, "unmatched ')'");
      throw SExprError(SExprErrorKind::TrailingInput, pos_, "unexpected input after expression");
    }
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }

  SExpr parse_one() {
    // Iterative over list nesting so deeply nested input cannot exhaust the stack.
    std::vector<std::pair<std::size_t, std::vector<SExpr>>> stack;
    while (true) {
      skip_ws();
      if (pos_ == text_.size()) {
        throw SExprError(SExprErrorKind::UnbalancedParens, stack.empty() ? pos_ : stack.back().first,
                         "unclosed '('");
      }
      const char c = text_[pos_];
      std::optional<SExpr> done;
      if (c == '(') {
        stack.emplace_back(pos_, std::vector<SExpr>{});
        ++pos_;
        continue;
      }
      if (c == ')') {
        if (stack.empty()) throw SExprError(SExprErrorKind::UnbalancedParens, pos_, "unmatched ')'");
        ++pos_;
        done = SExpr::list(std::move(stack.back().second));
        stack.pop_back();
      } else if (c == '"') {
        const std::size_t at = pos_;
        auto text = quoted();
        if (text.empty()) throw SExprError(SExprErrorKind::EmptyInput, at, "empty atom");
        done = SExpr::atom(std::move(text));
      } else {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !is_space(text_[pos_]) && text_[pos_] != '(' && text_[pos_] != ')' &&
               text_[pos_] != '"') {
          ++pos_;
        }
        done = SExpr::atom(std::string(text_.substr(start, pos_ - start)));
      }
      if (stack.empty()) return std::move(*done);
      stack.back().second.push_back(std::move(*done));
    }
  }

  std::string quoted() {
    const std::size_t start = pos_++;
    std::string out;
    while (pos_ < text_.size()) {
      const char c = text_[pos_++];
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (pos_ == text_.size()) break;
      switch (text_[pos_++]) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        default: throw SExprError(SExprErrorKind::BadEscape, pos_ - 2, "unknown escape");
      }
    }
    throw SExprError(SExprErrorKind::UnterminatedString, start, "string never closed");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

SExpr SExpr::atom(std::string text) {
  if (text.empty()) throw std::invalid_argument("atoms must be non-empty");
  SExpr e;
  e.is_atom_ = true;
  e.text_ = std::move(text);
  return e;
}

SExpr SExpr::list(std::vector<SExpr> items) {
  SExpr e;
  e.items_ = std::move(items);
  return e;
}

const std::string& SExpr::text() const {
  if (!is_atom_) throw std::logic_error("SExpr::text on a list");
  return text_;
}

const std::vector<SExpr>& SExpr::items() const {
  if (is_atom_) throw std::logic_error("SExpr::items on an atom");
  return items_;
}

SExprError::SExprError(SExprErrorKind kind, std::size_t offset, const std::string& detail)
    : std::runtime_error(std::string(kind_name(kind)) + " at offset " + std::to_string(offset) + ": " + detail),
      kind_(kind),
      offset_(offset) {}

std::string print(const SExpr& e) {
  std::string out;
  print_to(e, out);
  return out;
}

SExpr parse_sexpr(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace pbtbench::crosslang
