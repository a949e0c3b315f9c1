#pragma once

#include <string_view>

namespace qcorr {

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace qcorr
