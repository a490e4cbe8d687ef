#include "slotshift/model.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace slotshift {

const char* to_string(TaskKind kind) {
    switch (kind) {
        case TaskKind::OfflinePeriodic: return "offline-periodic";
        case TaskKind::RuntimePeriodic: return "runtime-periodic";
        case TaskKind::Aperiodic: return "aperiodic";
        case TaskKind::BestEffort: return "best-effort";
    }
    return "?";
}

std::optional<TaskKind> task_kind_from_string(const std::string& s) {
    if (s == "offline-periodic") return TaskKind::OfflinePeriodic;
    if (s == "runtime-periodic") return TaskKind::RuntimePeriodic;
    if (s == "aperiodic") return TaskKind::Aperiodic;
    if (s == "best-effort") return TaskKind::BestEffort;
    return std::nullopt;
}

const TaskSpec* SchedulingTable::find_task(int id) const {
    for (const auto& t : tasks)
        if (t.id == id) return &t;
    return nullptr;
}

Slot SchedulingTable::idle_cells(int core) const {
    Slot n = 0;
    for (int cell : cells[core])
        if (cell == kIdle) ++n;
    return n;
}

bool SchedulingTable::operator==(const SchedulingTable& other) const {
    if (config.total_cores != other.config.total_cores || config.tt_cores != other.config.tt_cores ||
        config.slot_ms != other.config.slot_ms || config.horizon != other.config.horizon)
        return false;
    if (cells != other.cells) return false;
    if (tasks.size() != other.tasks.size()) return false;
    for (size_t i = 0; i < tasks.size(); ++i) {
        const auto& a = tasks[i];
        const auto& b = other.tasks[i];
        if (a.id != b.id || a.name != b.name || a.kind != b.kind || a.wcet != b.wcet ||
            a.period != b.period || a.relative_deadline != b.relative_deadline ||
            a.release != b.release || a.assigned_core != b.assigned_core)
            return false;
    }
    return true;
}

SchedulingTable make_empty_table(const SystemConfig& config, std::vector<TaskSpec> tasks) {
    SchedulingTable t;
    t.config = config;
    t.tasks = std::move(tasks);
    t.cells.assign(config.tt_cores, std::vector<int>(config.horizon, kIdle));
    return t;
}

ValidationReport validate_task_set(const std::vector<TaskSpec>& tasks, const SystemConfig& config) {
    ValidationReport report;
    auto add = [&](int id, std::string msg) { report.violations.push_back({id, std::move(msg)}); };

    if (!config.valid()) add(-1, "invalid system config (need 1 <= tt_cores < total_cores, horizon >= 1, slot_ms > 0)");

    std::set<int> seen;
    std::map<int, double> core_util;
    for (const auto& t : tasks) {
        if (!seen.insert(t.id).second) add(t.id, "duplicate task id");
        bool rt = t.kind != TaskKind::BestEffort;
        if (rt && t.wcet < 1) add(t.id, "WCET < 1");
        if (rt && t.relative_deadline < t.wcet) add(t.id, "deadline < WCET");
        if (t.is_periodic()) {
            if (t.period < 1) add(t.id, "periodic task without period");
            if (t.period >= 1 && t.relative_deadline > t.period) add(t.id, "deadline > period");
            if (t.release < 0) add(t.id, "negative release");
        }
        if (t.kind == TaskKind::OfflinePeriodic && t.assigned_core >= 0) {
            if (t.assigned_core >= config.tt_cores)
                add(t.id, "assigned core out of range");
            else if (t.period > 0)
                core_util[t.assigned_core] += t.utilization();
        }
    }
    for (const auto& [core, util] : core_util) {
        if (util > 1.0 + 1e-12)
            add(-1, "core " + std::to_string(core) + " over-utilized (" + std::to_string(util) + ")");
    }
    return report;
}

}  // namespace slotshift
