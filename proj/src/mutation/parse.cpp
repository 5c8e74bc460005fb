#include <algorithm>
#include <set>

#include "pbtbench/mutation/mutation.hpp"

namespace pbtbench::mutation {

namespace {

bool is_blank(char c) noexcept { return c == ' ' || c == '\t'; }
bool is_space(char c) noexcept { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::size_t line_of(std::string_view src, std::size_t offset) {
  return 1 + static_cast<std::size_t>(
                 std::count(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(std::min(offset, src.size())), '\n'));
}

enum class TokenType { Opener, Header, Closer };

struct Token {
  TokenType type;
  std::size_t start;
  std::size_t end;
  std::string name;
};

class Tokenizer {
 public:
  Tokenizer(std::string_view src, const CommentStyle& style) : src_(src), style_(style) {}

  std::optional<Token> next() {
    return style_.line_mode() ? next_line_token() : next_block_token();
  }

  [[noreturn]] void fail(ErrorKind kind, std::size_t offset, const std::string& detail) const {
    throw MutationError(kind, offset, line_of(src_, offset), detail);
  }

 private:
  bool at(std::size_t i, std::string_view s) const noexcept { return src_.substr(i).starts_with(s); }

  std::size_t skip_blanks(std::size_t i) const noexcept {
    while (i < src_.size() && is_blank(src_[i])) ++i;
    return i;
  }

  std::size_t count_markers(std::size_t& i) const noexcept {
    std::size_t n = 0;
    while (at(i, style_.marker)) {
      i += style_.marker.size();
      ++n;
    }
    return n;
  }

  // Parses `[ \t]+ NAME [ \t]*` starting at i; returns the name and moves i.
  std::optional<std::string> header_name(std::size_t& i) const {
    std::size_t j = skip_blanks(i);
    if (j == i) return std::nullopt;
    std::size_t k = j;
    while (k < src_.size() && !is_space(src_[k]) && !at(k, style_.end)) ++k;
    std::string name(src_.substr(j, k - j));
    if (!is_identifier(name)) return std::nullopt;
    i = skip_blanks(k);
    return name;
  }

  std::optional<Token> next_block_token() {
    const auto& b = style_.begin;
    const auto& e = style_.end;
    while (true) {
      const std::size_t start = src_.find(b, pos_);
      if (start == std::string_view::npos) {
        pos_ = src_.size();
        return std::nullopt;
      }
      std::size_t i = start + b.size();

      // closer: <begin> [ \t]+ <marker><end>
      if (std::size_t j = skip_blanks(i); j > i && at(j, style_.marker) && at(j + style_.marker.size(), e)) {
        pos_ = j + style_.marker.size() + e.size();
        return Token{TokenType::Closer, start, pos_, {}};
      }

      const std::size_t markers = count_markers(i);
      if (markers == 0) {
        pos_ = start + 1;
        continue;
      }
      if (markers >= 2) {
        if (markers > 2) fail(ErrorKind::InvalidHeader, start, "mutant header must use exactly two markers");
        auto name = header_name(i);
        if (!name || !at(i, e)) fail(ErrorKind::InvalidHeader, start, "malformed mutant header");
        pos_ = i + e.size();
        return Token{TokenType::Header, start, pos_, std::move(*name)};
      }
      // opener: <begin><marker> [ \t]+ <end>
      if (std::size_t j = skip_blanks(i); j > i && at(j, e)) {
        pos_ = j + e.size();
        return Token{TokenType::Opener, start, pos_, {}};
      }
      // Commented code: skip the whole comment so its contents are never tokens.
      const std::size_t close = src_.find(e, i);
      pos_ = close == std::string_view::npos ? start + 1 : close + e.size();
    }
  }

  std::optional<Token> next_line_token() {
    const auto& b = style_.begin;
    while (pos_ < src_.size()) {
      const std::size_t line_start = pos_;
      std::size_t eol = src_.find('\n', line_start);
      if (eol == std::string_view::npos) eol = src_.size();
      pos_ = eol == src_.size() ? eol : eol + 1;

      const std::size_t start = skip_blanks(line_start);
      if (!at(start, b)) continue;
      std::size_t i = start + b.size();
      auto rest_blank = [&](std::size_t k) { return skip_blanks(k) == eol; };

      if (std::size_t j = skip_blanks(i); j > i && at(j, style_.marker) && rest_blank(j + style_.marker.size())) {
        pos_ = eol;
        return Token{TokenType::Closer, start, eol, {}};
      }
      const std::size_t markers = count_markers(i);
      if (markers == 0) continue;
      if (markers >= 2) {
        if (markers > 2) fail(ErrorKind::InvalidHeader, start, "mutant header must use exactly two markers");
        auto name = header_name(i);
        if (!name || i != eol) fail(ErrorKind::InvalidHeader, start, "malformed mutant header");
        pos_ = eol;
        return Token{TokenType::Header, start, eol, std::move(*name)};
      }
      if (rest_blank(i)) {
        pos_ = eol;
        return Token{TokenType::Opener, start, eol, {}};
      }
    }
    return std::nullopt;
  }

  std::string_view src_;
  const CommentStyle& style_;
  std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) noexcept {
  std::size_t a = 0, b = s.size();
  while (a < b && is_space(s[a])) ++a;
  while (b > a && is_space(s[b - 1])) --b;
  return s.substr(a, b - a);
}

Alternative classify(std::string_view segment, const CommentStyle& style) {
  Alternative alt;
  alt.segment = std::string(segment);
  const std::string_view core = trim(segment);
  if (style.line_mode()) {
    bool any = false, all = true;
    std::size_t pos = 0;
    while (pos <= segment.size()) {
      std::size_t eol = segment.find('\n', pos);
      if (eol == std::string_view::npos) eol = segment.size();
      const std::string_view line = trim(segment.substr(pos, eol - pos));
      if (!line.empty()) {
        if (line.starts_with(style.begin + style.marker)) {
          any = true;
        } else {
          all = false;
        }
      }
      pos = eol + 1;
    }
    alt.commented = any && all;
  } else {
    const std::string open = style.begin + style.marker;
    if (core.size() >= open.size() + style.end.size() && core.starts_with(open)) {
      const std::size_t close = core.find(style.end, open.size());
      alt.commented = close == core.size() - style.end.size();
    }
  }
  alt.code = alt.commented ? std::string(trim(uncomment_segment(segment, style))) : std::string(core);
  return alt;
}

}  // namespace

void CommentStyle::validate() const {
  if (begin.empty() || end.empty() || marker.empty()) {
    throw std::invalid_argument("comment style fields must be non-empty");
  }
  if (begin == end) {
    throw std::invalid_argument("comment begin and end must differ");
  }
  if (std::any_of(marker.begin(), marker.end(), [](char c) { return is_space(c); })) {
    throw std::invalid_argument("comment marker must not contain whitespace");
  }
}

std::map<std::string, CommentStyle> default_styles() {
  return {
      {".hs", CommentStyle::haskell()},   {".v", CommentStyle::ocaml()},
      {".ml", CommentStyle::ocaml()},     {".impl", CommentStyle::c_block()},
      {".c", CommentStyle::c_block()},    {".cpp", CommentStyle::c_block()},
      {".hpp", CommentStyle::c_block()},  {".rs", CommentStyle::c_line()},
      {".rkt", CommentStyle{";", "\n", "!"}},   {".sh", CommentStyle{"#", "\n", "!"}},
      {".py", CommentStyle{"#", "\n", "!"}},
  };
}

bool is_identifier(std::string_view s) noexcept {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  if (!alpha(s.front())) return false;
  return std::all_of(s.begin(), s.end(), [&](char c) { return alpha(c) || (c >= '0' && c <= '9'); });
}

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::UnterminatedVariation: return "UnterminatedVariation";
    case ErrorKind::MutantBodyMissing: return "MutantBodyMissing";
    case ErrorKind::NestedVariation: return "NestedVariation";
    case ErrorKind::DuplicateMutantName: return "DuplicateMutantName";
    case ErrorKind::InvalidHeader: return "InvalidHeader";
    case ErrorKind::UnexpectedMarker: return "UnexpectedMarker";
    case ErrorKind::EmptyVariation: return "EmptyVariation";
    case ErrorKind::ActivationConflict: return "ActivationConflict";
    case ErrorKind::UnknownMutant: return "UnknownMutant";
    case ErrorKind::AmbiguousMutant: return "AmbiguousMutant";
  }
  return "?";
}

MutationError::MutationError(ErrorKind kind, std::size_t offset, std::size_t line, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + " at line " + std::to_string(line) + " (offset " +
                         std::to_string(offset) + "): " + detail),
      kind_(kind),
      offset_(offset),
      line_(line) {}

std::optional<std::string> Variation::active_mutant() const {
  for (const auto& m : mutants) {
    if (!m.body.commented) return m.name;
  }
  return std::nullopt;
}

const Mutant* Variation::find(std::string_view name) const noexcept {
  for (const auto& m : mutants) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

ParsedSource parse_variations(std::string_view source, const CommentStyle& style) {
  style.validate();
  ParsedSource out;
  out.original = std::string(source);
  out.style = style;

  Tokenizer tok(source, style);
  std::size_t inert_start = 0;

  while (auto t = tok.next()) {
    if (t->type != TokenType::Opener) {
      tok.fail(ErrorKind::UnexpectedMarker, t->start,
               t->type == TokenType::Header ? "mutant header outside a variation" : "closer without opener");
    }
    Variation var;
    var.begin_offset = t->start;
    var.opener = std::string(source.substr(t->start, t->end - t->start));
    out.inert.emplace_back(source.substr(inert_start, t->start - inert_start));

    std::size_t seg_start = t->end;
    Mutant* current = nullptr;
    std::set<std::string, std::less<>> names;
    bool closed = false;

    auto finish_segment = [&](std::size_t seg_end) {
      Alternative alt = classify(source.substr(seg_start, seg_end - seg_start), style);
      if (current == nullptr) {
        var.base = std::move(alt);
        return;
      }
      if (alt.code.empty()) {
        tok.fail(ErrorKind::MutantBodyMissing, current->header_offset,
                 "mutant '" + current->name + "' has no body");
      }
      current->body = std::move(alt);
    };

    while (auto u = tok.next()) {
      if (u->type == TokenType::Opener) {
        tok.fail(ErrorKind::NestedVariation, u->start, "variation opened inside another variation");
      }
      finish_segment(u->start);
      if (u->type == TokenType::Closer) {
        var.closer = std::string(source.substr(u->start, u->end - u->start));
        var.end_offset = u->end;
        closed = true;
        break;
      }
      if (!names.insert(u->name).second) {
        tok.fail(ErrorKind::DuplicateMutantName, u->start, "mutant '" + u->name + "' declared twice");
      }
      Mutant m;
      m.name = u->name;
      m.header = std::string(source.substr(u->start, u->end - u->start));
      m.header_offset = u->start;
      var.mutants.push_back(std::move(m));
      current = &var.mutants.back();
      seg_start = u->end;
    }
    if (!closed) {
      tok.fail(ErrorKind::UnterminatedVariation, var.begin_offset, "variation is never closed");
    }
    if (var.mutants.empty()) {
      tok.fail(ErrorKind::EmptyVariation, var.begin_offset, "variation declares no mutants");
    }
    const bool base_active = !var.base.commented && !var.base.code.empty();
    const auto active = std::count_if(var.mutants.begin(), var.mutants.end(),
                                      [](const Mutant& m) { return !m.body.commented; });
    const bool ok = base_active ? active == 0 : (active == 1 || (active == 0 && var.base.code.empty()));
    if (!ok) {
      tok.fail(ErrorKind::ActivationConflict, var.begin_offset,
               "exactly one alternative must be active, found " + std::to_string(active + (base_active ? 1 : 0)));
    }
    inert_start = var.end_offset;
    out.variations.push_back(std::move(var));
  }
  out.inert.emplace_back(source.substr(inert_start));
  return out;
}

}  // namespace pbtbench::mutation
