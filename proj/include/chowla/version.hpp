#pragma once

namespace chowla {
inline constexpr const char* kVersion = "1.0.0";
}
