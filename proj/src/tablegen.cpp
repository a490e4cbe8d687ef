#include "slotshift/tablegen.hpp"

#include <algorithm>

namespace slotshift {

std::map<int, int> partition_tasks(const std::vector<TaskSpec>& tasks, const SystemConfig& config) {
    std::vector<const TaskSpec*> offline;
    for (const auto& t : tasks)
        if (t.kind == TaskKind::OfflinePeriodic) offline.push_back(&t);
    // Worst-fit decreasing: heaviest task first, onto the least loaded core.
    std::stable_sort(offline.begin(), offline.end(), [](const TaskSpec* a, const TaskSpec* b) {
        if (a->utilization() != b->utilization()) return a->utilization() > b->utilization();
        return a->id < b->id;
    });
    std::vector<double> load(config.tt_cores, 0.0);
    std::map<int, int> assignment;
    for (const TaskSpec* t : offline) {
        int best = 0;
        for (int c = 1; c < config.tt_cores; ++c)
            if (load[c] < load[best]) best = c;
        if (load[best] + t->utilization() > 1.0 + 1e-12)
            throw InfeasibleError("task " + std::to_string(t->id) + " does not fit on any core", best,
                                  -1, t->id);
        load[best] += t->utilization();
        assignment[t->id] = best;
    }
    return assignment;
}

namespace {

struct OfflineJob {
    int task;
    int job_index;
    Slot release;
    Slot deadline;  // absolute, exclusive
    int remaining;
};

}  // namespace

TablegenResult build_table(std::vector<TaskSpec> tasks, const SystemConfig& config) {
    bool preassigned = true;
    for (const auto& t : tasks)
        if (t.kind == TaskKind::OfflinePeriodic && t.assigned_core < 0) preassigned = false;
    if (!preassigned) {
        const auto assignment = partition_tasks(tasks, config);
        for (auto& t : tasks)
            if (t.kind == TaskKind::OfflinePeriodic) t.assigned_core = assignment.at(t.id);
    }

    TablegenResult result;
    result.table = make_empty_table(config, tasks);
    const Slot horizon = config.horizon;

    std::vector<std::vector<OfflineJob>> per_core(config.tt_cores);
    for (const auto& t : tasks) {
        if (t.kind != TaskKind::OfflinePeriodic) continue;
        for (Slot r = t.release, k = 0; r < horizon; r += t.period, ++k) {
            if (r + t.relative_deadline > horizon) {
                result.truncated_jobs.emplace_back(t.id, static_cast<int>(k));
                continue;
            }
            per_core[t.assigned_core].push_back(
                {t.id, static_cast<int>(k), r, r + t.relative_deadline, t.wcet});
        }
    }

    for (int core = 0; core < config.tt_cores; ++core) {
        auto& jobs = per_core[core];
        auto& row = result.table.cells[core];
        for (Slot s = 0; s < horizon; ++s) {
            OfflineJob* pick = nullptr;
            for (auto& j : jobs) {
                if (j.remaining == 0 || j.release > s) continue;
                if (j.deadline <= s)
                    throw InfeasibleError("deadline of task " + std::to_string(j.task) +
                                              " job " + std::to_string(j.job_index) +
                                              " passed with work remaining",
                                          core, s, j.task);
                if (!pick || j.deadline < pick->deadline ||
                    (j.deadline == pick->deadline && j.task < pick->task))
                    pick = &j;
            }
            if (pick) {
                row[s] = pick->task;
                --pick->remaining;
            }
        }
        for (const auto& j : jobs)
            if (j.remaining > 0)
                throw InfeasibleError("task " + std::to_string(j.task) + " job " +
                                          std::to_string(j.job_index) + " unfinished at horizon",
                                      core, horizon, j.task);
    }
    return result;
}

}  // namespace slotshift
