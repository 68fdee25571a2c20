#pragma once

#include <string>

namespace vortnet {

/// 17 significant digits, so the text parses back to the same double.
std::string format_double(double value);

}  // namespace vortnet
