#include "pbtbench/util/template.hpp"

#include <algorithm>
#include <cctype>

namespace pbtbench::util {

namespace {

// Walks the template, calling `text` for literal runs and `hole` for names.
template <typename Text, typename Hole>
void scan(std::string_view t, Text text, Hole hole) {
  std::size_t i = 0;
  while (i < t.size()) {
    const char c = t[i];
    if (c == '{' && i + 1 < t.size() && t[i + 1] == '{') {
      text("{");
      i += 2;
    } else if (c == '}' && i + 1 < t.size() && t[i + 1] == '}') {
      text("}");
      i += 2;
    } else if (c == '{') {
      const auto close = t.find('}', i + 1);
      if (close == std::string_view::npos) throw TemplateError("unterminated placeholder at offset " + std::to_string(i));
      const auto name = t.substr(i + 1, close - i - 1);
      if (name.empty() || name.find('{') != std::string_view::npos) {
        throw TemplateError("malformed placeholder at offset " + std::to_string(i));
      }
      hole(std::string(name));
      i = close + 1;
    } else if (c == '}') {
      throw TemplateError("unmatched '}' at offset " + std::to_string(i));
    } else {
      text(std::string_view(&t[i], 1));
      ++i;
    }
  }
}

}  // namespace

std::vector<std::string> placeholders(std::string_view tmpl) {
  std::vector<std::string> out;
  scan(tmpl, [](std::string_view) {}, [&](std::string name) { out.push_back(std::move(name)); });
  return out;
}

std::string shell_quote(std::string_view value) {
  const bool safe = !value.empty() && std::all_of(value.begin(), value.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || std::string_view("_-./:=+,@%").find(c) != std::string_view::npos;
  });
  if (safe) return std::string(value);
  std::string out = "'";
  for (char c : value) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

std::string expand(std::string_view tmpl, const std::map<std::string, std::string>& values,
                   const std::vector<std::string>& raw) {
  std::string out;
  scan(
      tmpl, [&](std::string_view s) { out += s; },
      [&](const std::string& name) {
        const auto it = values.find(name);
        if (it == values.end()) throw TemplateError("no value for placeholder {" + name + "}");
        const bool verbatim = std::find(raw.begin(), raw.end(), name) != raw.end();
        out += verbatim ? it->second : shell_quote(it->second);
      });
  return out;
}

}  // namespace pbtbench::util
