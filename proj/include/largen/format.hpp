#pragma once

#include <string>
#include <string_view>

namespace largen {

// Shortest-safe round-trip text for a double: 17 significant digits, "inf" for +infinity.
std::string format_real(double value);

// Inverse of format_real; accepts "inf"/"infinity". Throws Error(Config) on junk.
double parse_real(std::string_view text);

}  // namespace largen
