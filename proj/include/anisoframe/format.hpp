#pragma once

#include <string>

namespace anisoframe {

// Fixed 17 significant digits; used for every serialized number.
std::string fmt17(double v);

}  // namespace anisoframe
