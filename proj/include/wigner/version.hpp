#pragma once

namespace wigner {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace wigner
