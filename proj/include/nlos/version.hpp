#pragma once

namespace nlos {
inline constexpr const char* kVersionTag = "nlos-speckle/1.0.0";
}
