#pragma once

namespace comlab {
inline constexpr const char* kVersion = "0.1.0";
}
