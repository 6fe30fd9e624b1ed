#pragma once

namespace graphnls {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace graphnls
