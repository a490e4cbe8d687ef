#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace slotshift {

using Slot = std::int64_t;

/// Sentinel assignment for an empty table cell.
inline constexpr int kIdle = -1;

enum class TaskKind {
    OfflinePeriodic,
    RuntimePeriodic,
    Aperiodic,
    BestEffort,
};

const char* to_string(TaskKind kind);
std::optional<TaskKind> task_kind_from_string(const std::string& s);

/// Core topology and slot geometry. TT cores are the last `tt_cores` of
/// `total_cores`; at least one core is left for the slot-shifting manager.
/// Table rows and all runtime state are indexed by TT-relative core
/// [0, tt_cores), i.e. row i corresponds to physical core
/// total_cores - tt_cores + i.
struct SystemConfig {
    int total_cores = 2;
    int tt_cores = 1;
    double slot_ms = 3.0;
    Slot horizon = 1;

    bool valid() const {
        return tt_cores >= 1 && tt_cores < total_cores && horizon >= 1 && slot_ms > 0.0;
    }
};

/// Static description of one single-threaded task, all times in slots.
struct TaskSpec {
    int id = 0;
    std::string name;
    TaskKind kind = TaskKind::OfflinePeriodic;
    int wcet = 1;
    Slot period = 0;             // 0 = none (aperiodic / best-effort)
    Slot relative_deadline = 0;  // for aperiodic: deadline after arrival
    Slot release = 0;            // phase for periodic, unused for aperiodic
    int assigned_core = -1;      // TT-relative; set by tablegen

    bool is_periodic() const {
        return kind == TaskKind::OfflinePeriodic || kind == TaskKind::RuntimePeriodic;
    }
    double utilization() const {
        return period > 0 ? static_cast<double>(wcet) / static_cast<double>(period) : 0.0;
    }
};

/// Cyclic per-core, per-slot assignment over [0, horizon).
/// cells[core][slot] holds a task id or kIdle.
struct SchedulingTable {
    SystemConfig config;
    std::vector<TaskSpec> tasks;
    std::vector<std::vector<int>> cells;

    const TaskSpec* find_task(int id) const;
    /// Idle cells on one core's row.
    Slot idle_cells(int core) const;

    bool operator==(const SchedulingTable& other) const;
};

SchedulingTable make_empty_table(const SystemConfig& config, std::vector<TaskSpec> tasks = {});

struct Violation {
    int task_id;  // -1 when not tied to a single task
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

/// Pure structural check of a task set against a system config. Violations
/// are data, not failures: the complete list is always returned.
ValidationReport validate_task_set(const std::vector<TaskSpec>& tasks, const SystemConfig& config);

}  // namespace slotshift
