#include "slotshift/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace slotshift {

namespace {

nlohmann::ordered_json provenance_json(const Provenance& prov) {
    nlohmann::ordered_json p;
    p["tool"] = "slotshift";
    p["seed"] = prov.seed;
    p["config"] = prov.config.empty() ? nlohmann::ordered_json::object() : prov.config;
    return p;
}

nlohmann::ordered_json system_to_json(const SystemConfig& c) {
    return {{"total_cores", c.total_cores},
            {"tt_cores", c.tt_cores},
            {"slot_ms", c.slot_ms},
            {"horizon", c.horizon}};
}

SystemConfig system_from_json(const nlohmann::json& j) {
    SystemConfig c;
    c.total_cores = j.at("total_cores").get<int>();
    c.tt_cores = j.at("tt_cores").get<int>();
    c.slot_ms = j.at("slot_ms").get<double>();
    c.horizon = j.at("horizon").get<Slot>();
    if (!c.valid()) throw std::runtime_error("invalid system config in document");
    return c;
}

}  // namespace

nlohmann::ordered_json task_to_json(const TaskSpec& t) {
    nlohmann::ordered_json j;
    j["id"] = t.id;
    j["name"] = t.name;
    j["kind"] = to_string(t.kind);
    j["wcet"] = t.wcet;
    if (t.period > 0) j["period"] = t.period;
    j["deadline"] = t.relative_deadline;
    j["release"] = t.release;
    if (t.assigned_core >= 0) j["core"] = t.assigned_core;
    return j;
}

TaskSpec task_from_json(const nlohmann::json& j) {
    TaskSpec t;
    t.id = j.at("id").get<int>();
    t.name = j.value("name", "task" + std::to_string(t.id));
    const auto kind = task_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw std::runtime_error("unknown task kind in document");
    t.kind = *kind;
    t.wcet = j.at("wcet").get<int>();
    t.period = j.value("period", Slot{0});
    t.relative_deadline = j.at("deadline").get<Slot>();
    t.release = j.value("release", Slot{0});
    t.assigned_core = j.value("core", -1);
    return t;
}

nlohmann::ordered_json taskset_to_json(const SystemConfig& config, const std::vector<TaskSpec>& tasks,
                                       const Provenance& prov) {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["provenance"] = provenance_json(prov);
    j["system"] = system_to_json(config);
    j["tasks"] = nlohmann::ordered_json::array();
    for (const auto& t : tasks) j["tasks"].push_back(task_to_json(t));
    return j;
}

std::pair<SystemConfig, std::vector<TaskSpec>> taskset_from_json(const nlohmann::json& j) {
    if (j.value("version", 0) != 1) throw std::runtime_error("unsupported taskset version");
    SystemConfig config = system_from_json(j.at("system"));
    std::vector<TaskSpec> tasks;
    for (const auto& tj : j.at("tasks")) tasks.push_back(task_from_json(tj));
    return {config, tasks};
}

nlohmann::ordered_json table_to_json(const SchedulingTable& table, const Provenance& prov) {
    nlohmann::ordered_json j = taskset_to_json(table.config, table.tasks, prov);
    j["cells"] = table.cells;
    return j;
}

SchedulingTable table_from_json(const nlohmann::json& j) {
    auto [config, tasks] = taskset_from_json(j);
    SchedulingTable t;
    t.config = config;
    t.tasks = std::move(tasks);
    t.cells = j.at("cells").get<std::vector<std::vector<int>>>();
    if (static_cast<int>(t.cells.size()) != config.tt_cores)
        throw std::runtime_error("table cells do not match tt_cores");
    for (const auto& row : t.cells)
        if (static_cast<Slot>(row.size()) != config.horizon)
            throw std::runtime_error("table row length does not match horizon");
    return t;
}

nlohmann::ordered_json arrivals_to_json(const std::vector<Arrival>& arrivals, const Provenance& prov) {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["provenance"] = provenance_json(prov);
    j["arrivals"] = nlohmann::ordered_json::array();
    for (const auto& a : arrivals) j["arrivals"].push_back({{"slot", a.slot}, {"task", a.task}});
    return j;
}

std::vector<Arrival> arrivals_from_json(const nlohmann::json& j) {
    if (j.value("version", 0) != 1) throw std::runtime_error("unsupported arrivals version");
    std::vector<Arrival> out;
    for (const auto& aj : j.at("arrivals")) out.push_back({aj.at("slot").get<Slot>(), aj.at("task").get<int>()});
    return out;
}

void write_json_file(const std::string& path, const nlohmann::ordered_json& j) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << j.dump(2) << '\n';
    if (!os) throw std::runtime_error("write failed: " + path);
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    try {
        return nlohmann::json::parse(is);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

}  // namespace slotshift
