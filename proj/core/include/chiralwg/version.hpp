#pragma once

namespace chiralwg {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace chiralwg
