#pragma once

namespace ldps {

inline constexpr const char* kVersion = "0.1.0";

} // namespace ldps
