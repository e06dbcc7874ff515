#pragma once

namespace caperc {

inline constexpr const char* version = "0.1.0";

}  // namespace caperc
