#pragma once

namespace sepball {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sepball
