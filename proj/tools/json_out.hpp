#pragma once

#include <string>

#include "json.hpp"

namespace lpcond::cli {

/// Serializes like json::dump(2) but prints floating-point numbers with 17
/// significant digits; non-finite numbers become null.
std::string dump_json(const nlohmann::json& value);

}  // namespace lpcond::cli
