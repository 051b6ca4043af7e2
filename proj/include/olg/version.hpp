#pragma once

namespace olg {

inline constexpr char kVersionString[] = "0.1.0";

}  // namespace olg
