#pragma once

namespace evonav {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace evonav
