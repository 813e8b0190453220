#pragma once

namespace ssig {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ssig
