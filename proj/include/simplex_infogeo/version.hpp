#pragma once

namespace sig {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace sig
