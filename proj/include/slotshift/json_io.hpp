#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "slotshift/model.hpp"
#include "slotshift/workload.hpp"

namespace slotshift {

/// Document writers embed a provenance header (tool, seed, resolved
/// config) so every artifact is self-describing.
struct Provenance {
    std::uint64_t seed = 0;
    nlohmann::ordered_json config;  // resolved parameters, free-form
};

nlohmann::ordered_json task_to_json(const TaskSpec& t);
TaskSpec task_from_json(const nlohmann::json& j);

nlohmann::ordered_json taskset_to_json(const SystemConfig& config, const std::vector<TaskSpec>& tasks,
                                       const Provenance& prov);
/// Returns (config, tasks); throws std::runtime_error with context on
/// malformed documents.
std::pair<SystemConfig, std::vector<TaskSpec>> taskset_from_json(const nlohmann::json& j);

nlohmann::ordered_json table_to_json(const SchedulingTable& table, const Provenance& prov);
SchedulingTable table_from_json(const nlohmann::json& j);

nlohmann::ordered_json arrivals_to_json(const std::vector<Arrival>& arrivals, const Provenance& prov);
std::vector<Arrival> arrivals_from_json(const nlohmann::json& j);

void write_json_file(const std::string& path, const nlohmann::ordered_json& j);
nlohmann::json read_json_file(const std::string& path);

}  // namespace slotshift
