#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hcec/sweeper.hpp"

namespace hcec {

using Json = nlohmann::ordered_json;

Json stats_to_json(const SweepResult& result);
void write_stats_json(const SweepResult& result, const std::string& path);

// Wall-clock fields, which are the only ones allowed to differ between two
// runs with the same configuration and seed.
const std::vector<std::string>& wall_clock_fields();
Json strip_wall_clock(Json stats);

// Validator for the subset of JSON Schema used by schema/stats.schema.json:
// type, enum, minimum, required, properties, additionalProperties, items.
// Returns one message per violation.
std::vector<std::string> validate_json(const Json& value, const Json& schema);

}  // namespace hcec
