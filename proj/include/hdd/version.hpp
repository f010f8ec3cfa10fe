#pragma once

namespace hdd {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hdd
