#pragma once

namespace psmatch {

inline constexpr const char* kVersion = "1.0.0";

} // namespace psmatch
