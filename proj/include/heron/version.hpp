#pragma once

namespace heron {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace heron
