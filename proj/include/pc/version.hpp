#pragma once

namespace pc {
inline constexpr const char* kVersion = "0.1.0";
}
