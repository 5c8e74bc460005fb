#pragma once

namespace pbtbench {
inline constexpr const char* kVersion = "0.1.0";
}
