#pragma once

#include <string>

namespace stagavg {

/// Shortest-round-trip-independent rendering with 17 significant digits,
/// '.' decimal separator and no locale influence ("inf"/"nan" for non-finite).
std::string format_real(double x);

}  // namespace stagavg
