#pragma once

namespace scholarmatch {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace scholarmatch
