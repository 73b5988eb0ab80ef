#pragma once

namespace mirflow {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mirflow
