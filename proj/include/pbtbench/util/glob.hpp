#pragma once

#include <string_view>

namespace pbtbench::util {

/// Shell-style wildcard match supporting `*` and `?`. No character classes.
bool glob_match(std::string_view pattern, std::string_view text) noexcept;

}  // namespace pbtbench::util
