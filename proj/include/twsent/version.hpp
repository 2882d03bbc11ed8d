#pragma once

namespace twsent {
inline constexpr const char* kVersion = "0.1.0";
}
