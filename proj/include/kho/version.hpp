#pragma once

namespace kho {

inline constexpr const char* version = "0.1.0";

}  // namespace kho
