#pragma once

namespace asw {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace asw
