#pragma once

#include <string>

#include "json.hpp"

#include "windml/eval/surrogate.hpp"

namespace windml::eval {

nlohmann::json to_json(const SurrogateConfig& cfg);
/// Starts from SurrogateConfig::defaults(family) and overrides the keys
/// present; Config error on unknown keys or wrong types.
SurrogateConfig config_from_json(const nlohmann::json& j);
/// Compact, key-sorted rendering used for config echoes.
std::string config_echo(const SurrogateConfig& cfg);

}  // namespace windml::eval
