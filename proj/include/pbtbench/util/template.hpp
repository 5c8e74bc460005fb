#pragma once

// Command templates: `{name}` is a placeholder, `{{` and `}}` are literal
// braces. Substituted values are single-quoted for /bin/sh.

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pbtbench::util {

class TemplateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Placeholder names in order of appearance (duplicates kept).
std::vector<std::string> placeholders(std::string_view tmpl);

std::string shell_quote(std::string_view value);

/// Values listed in `raw` are inserted verbatim instead of quoted.
std::string expand(std::string_view tmpl, const std::map<std::string, std::string>& values,
                   const std::vector<std::string>& raw = {});

}  // namespace pbtbench::util
