#pragma once

namespace frechet {

inline constexpr const char* version = "0.1.0";

}
