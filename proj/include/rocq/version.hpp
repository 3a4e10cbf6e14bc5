#pragma once

namespace rocq {

inline constexpr const char* kEngineVersion = "1.0.0";

}  // namespace rocq
