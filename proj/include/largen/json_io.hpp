#pragma once

#include <string>

#include "json.hpp"

namespace largen {

// Serializes like nlohmann::ordered_json::dump(indent) but prints every floating-point
// number with 17 significant digits (and +infinity as the string "inf").
std::string dump_json(const nlohmann::ordered_json& value, int indent = -1);

}  // namespace largen
