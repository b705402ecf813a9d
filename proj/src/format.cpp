#include "largen/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "largen/error.hpp"

namespace largen {

std::string format_real(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

double parse_real(std::string_view text) {
  if (text == "inf" || text == "+inf" || text == "infinity" || text == "Infinity")
    return std::numeric_limits<double>::infinity();
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw Error(ErrorKind::Config, "not a number: '" + std::string(text) + "'");
  return value;
}

}  // namespace largen
