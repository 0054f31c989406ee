#pragma once

namespace lcr {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace lcr
