#pragma once

namespace unshade {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace unshade
