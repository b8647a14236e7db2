#pragma once

namespace ada {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace ada
