#pragma once

namespace mcsl {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mcsl
