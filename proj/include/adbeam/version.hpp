#pragma once

namespace adbeam {
inline constexpr const char* kVersion = "0.1.0";
}
