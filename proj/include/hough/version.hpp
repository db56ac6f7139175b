#pragma once

namespace hough {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hough
