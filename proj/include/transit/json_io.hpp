#pragma once

#include <string>

#include "json.hpp"

namespace transit {

// Pretty JSON with every float printed as %.17g; non-finite floats become null.
std::string dump_json(const nlohmann::json& j);

// Parses text; throws InputError on malformed input.
nlohmann::json parse_json(const std::string& text);
nlohmann::json read_json_file(const std::string& path);

} // namespace transit
