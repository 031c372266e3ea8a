#pragma once

namespace fairify {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fairify
