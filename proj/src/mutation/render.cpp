#include <algorithm>

#include "pbtbench/mutation/mutation.hpp"

namespace pbtbench::mutation {

namespace {

bool is_space(char c) noexcept { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
bool is_blank(char c) noexcept { return c == ' ' || c == '\t'; }

struct Split {
  std::string_view lead, core, trail;
};

Split split_ws(std::string_view s) noexcept {
  std::size_t a = 0, b = s.size();
  while (a < b && is_space(s[a])) ++a;
  while (b > a && is_space(s[b - 1])) --b;
  return {s.substr(0, a), s.substr(a, b - a), s.substr(b)};
}

std::string_view trim(std::string_view s) noexcept { return split_ws(s).core; }

template <typename F>
std::string map_lines(std::string_view segment, F&& f) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    std::size_t eol = segment.find('\n', pos);
    const bool last = eol == std::string_view::npos;
    if (last) eol = segment.size();
    out += f(segment.substr(pos, eol - pos));
    if (last) break;
    out += '\n';
    pos = eol + 1;
  }
  return out;
}

}  // namespace

std::string comment_segment(std::string_view segment, const CommentStyle& style) {
  const std::string open = style.begin + style.marker;
  if (style.line_mode()) {
    return map_lines(segment, [&](std::string_view line) {
      std::size_t i = 0;
      while (i < line.size() && is_blank(line[i])) ++i;
      if (trim(line).empty()) return std::string(line);
      return std::string(line.substr(0, i)) + open + " " + std::string(line.substr(i));
    });
  }
  const auto [lead, core, trail] = split_ws(segment);
  if (core.empty()) return std::string(segment);
  std::string sep = " ";
  if (const auto nl = lead.rfind('\n'); nl != std::string_view::npos) {
    sep = "\n" + std::string(lead.substr(nl + 1));
  }
  std::string out;
  out.reserve(segment.size() + open.size() + style.end.size() + 2 * sep.size());
  out.append(lead).append(open).append(sep).append(core).append(sep).append(style.end).append(trail);
  return out;
}

std::string uncomment_segment(std::string_view segment, const CommentStyle& style) {
  const std::string open = style.begin + style.marker;
  if (style.line_mode()) {
    return map_lines(segment, [&](std::string_view line) {
      std::size_t i = 0;
      while (i < line.size() && is_blank(line[i])) ++i;
      if (!line.substr(i).starts_with(open)) return std::string(line);
      std::size_t j = i + open.size();
      if (j < line.size() && line[j] == ' ') ++j;
      return std::string(line.substr(0, i)) + std::string(line.substr(j));
    });
  }
  const auto [lead, core, trail] = split_ws(segment);
  if (!core.starts_with(open) || core.size() < open.size() + style.end.size() ||
      core.find(style.end, open.size()) != core.size() - style.end.size()) {
    return std::string(segment);
  }
  const std::string_view inner = core.substr(open.size(), core.size() - open.size() - style.end.size());
  std::string out;
  out.append(lead).append(trim(inner)).append(trail);
  return out;
}

bool is_canonical(const ParsedSource& parsed) {
  auto ok = [&](const Alternative& alt) {
    if (!alt.commented) return true;
    return comment_segment(uncomment_segment(alt.segment, parsed.style), parsed.style) == alt.segment;
  };
  for (const auto& var : parsed.variations) {
    if (!ok(var.base)) return false;
    for (const auto& m : var.mutants) {
      if (!ok(m.body)) return false;
    }
  }
  return true;
}

Selection all_base(const ParsedSource& parsed) {
  Selection sel;
  for (std::size_t i = 0; i < parsed.variations.size(); ++i) sel[i] = std::nullopt;
  return sel;
}

Selection as_found(const ParsedSource& parsed) {
  Selection sel;
  for (std::size_t i = 0; i < parsed.variations.size(); ++i) sel[i] = parsed.variations[i].active_mutant();
  return sel;
}

std::string render(const ParsedSource& parsed, const Selection& selection) {
  const auto& style = parsed.style;
  auto emit = [&](std::string& out, const Alternative& alt, bool want_active) {
    if (alt.code.empty() || want_active == !alt.commented) {
      out += alt.segment;
    } else if (want_active) {
      out += uncomment_segment(alt.segment, style);
    } else {
      out += comment_segment(alt.segment, style);
    }
  };

  for (const auto& [index, choice] : selection) {
    if (index >= parsed.variations.size()) {
      throw MutationError(ErrorKind::UnknownMutant, 0, 0, "no variation with index " + std::to_string(index));
    }
    const auto& var = parsed.variations[index];
    if (choice && var.find(*choice) == nullptr) {
      const auto line = 1 + static_cast<std::size_t>(std::count(
                                parsed.original.begin(),
                                parsed.original.begin() + static_cast<std::ptrdiff_t>(var.begin_offset), '\n'));
      throw MutationError(ErrorKind::UnknownMutant, var.begin_offset, line,
                          "variation " + std::to_string(index) + " has no mutant '" + *choice + "'");
    }
  }

  std::string out;
  out.reserve(parsed.original.size() + 64);
  for (std::size_t i = 0; i < parsed.variations.size(); ++i) {
    out += parsed.inert[i];
    const auto& var = parsed.variations[i];
    const auto it = selection.find(i);
    if (it == selection.end()) {
      out.append(parsed.original, var.begin_offset, var.end_offset - var.begin_offset);
      continue;
    }
    const auto& choice = it->second;
    out += var.opener;
    emit(out, var.base, !choice.has_value());
    for (const auto& m : var.mutants) {
      out += m.header;
      emit(out, m.body, choice && *choice == m.name);
    }
    out += var.closer;
  }
  out += parsed.inert.back();
  return out;
}

}  // namespace pbtbench::mutation
