#pragma once

#include <json.hpp>

#include <string>

namespace semical::detail {

/// Serializes with sorted keys and %.17g floats; non-finite floats become
/// null. Arrays of scalars stay on one line.
std::string dump_json(const nlohmann::json& j);

}  // namespace semical::detail
