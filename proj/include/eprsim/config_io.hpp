#pragma once

#include "eprsim/chain.hpp"

#include <json.hpp>

#include <string>

namespace eprsim {

/// Parses and validates a config document. Unknown keys anywhere in the
/// document are rejected by name; malformed JSON is reported with line
/// and column.
ChainConfig parse_config_text(const std::string &text);

/// parse_config_text over the file's contents; errors name the path.
ChainConfig parse_config_file(const std::string &path);

/// Builds a config from already-parsed JSON.
ChainConfig config_from_json(const nlohmann::json &j);

/// Full round-trippable document with defaults applied.
nlohmann::json config_to_json(const ChainConfig &config);

} // namespace eprsim
