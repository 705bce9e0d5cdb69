#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "tokdis/engine.hpp"

namespace tokdis {

// A parameter that takes several values across a sweep.
struct SweepAxis {
  std::string key;
  std::vector<nlohmann::json> values;
};

struct ConfigDocument {
  RunConfig base;
  std::vector<SweepAxis> axes;  // canonical key order, first axis varies slowest
  std::size_t reps = 1;
};

// Every key the document format accepts, in canonical order.
const std::vector<std::string>& config_keys();

// Sets one key on `config`. Throws ConfigError naming the key on unknown
// keys, wrong types and out-of-range values.
void apply_key(RunConfig& config, const std::string& key, const nlohmann::json& value);

// Merges `doc` (a JSON object) into `into`. Array values become sweep axes,
// except for `initial`, where an array of arrays is the explicit
// distribution. Later merges replace earlier values and axes.
void merge_config(ConfigDocument& into, const nlohmann::json& doc);

ConfigDocument parse_config(const nlohmann::json& doc);

// Relative paths that do not exist are also looked up in
// $TOKDIS_CONFIG_DIR.
ConfigDocument load_config_file(const std::filesystem::path& path);

// Cartesian product of the axes applied to the base; each point validated.
std::vector<RunConfig> expand(const ConfigDocument& doc);

nlohmann::json to_json(const RunConfig& config);

}  // namespace tokdis
