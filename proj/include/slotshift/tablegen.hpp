#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "slotshift/model.hpp"

namespace slotshift {

/// Offline table construction failed: a job could not receive its full WCET
/// before its deadline (or no core assignment exists).
struct InfeasibleError : std::runtime_error {
    int core = -1;
    Slot slot = -1;
    int task = -1;
    InfeasibleError(std::string msg, int core_, Slot slot_, int task_)
        : std::runtime_error(std::move(msg)), core(core_), slot(slot_), task(task_) {}
};

/// Worst-fit-decreasing partitioning of offline tasks onto TT cores.
/// No core may exceed utilization 1. Throws InfeasibleError otherwise.
std::map<int, int> partition_tasks(const std::vector<TaskSpec>& tasks, const SystemConfig& config);

struct TablegenResult {
    SchedulingTable table;
    /// (task id, job index) pairs whose absolute deadline exceeded the
    /// horizon; excluded from the table.
    std::vector<std::pair<int, int>> truncated_jobs;
};

/// Partition (unless tasks already carry assigned_core) and lay out each
/// core's jobs by offline EDF over [0, horizon). Ties break on smaller task
/// id. Throws InfeasibleError when a deadline passes with work remaining.
TablegenResult build_table(std::vector<TaskSpec> tasks, const SystemConfig& config);

}  // namespace slotshift
