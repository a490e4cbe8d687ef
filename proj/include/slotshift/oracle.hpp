#pragma once

#include <functional>
#include <vector>

#include "slotshift/intervals.hpp"
#include "slotshift/model.hpp"

namespace slotshift {
namespace oracle {

/// Full re-segmentation and idle-cell count from raw cells. Shares no code
/// with the incremental interval/engine paths; divergence from those is
/// always an engine defect candidate.
std::vector<std::vector<Interval>> recompute_sc_from_table(const SchedulingTable& table);

/// Working-table window flattened over consecutive cycles:
/// cells[core][t - offset] for absolute slot t.
struct FlatCells {
    Slot offset = 0;
    std::vector<std::vector<int>> cells;

    Slot end() const { return offset + (cells.empty() ? 0 : static_cast<Slot>(cells[0].size())); }
};

/// Exhaustive check: does some single core hold >= wcet idle cells in
/// (arrival, deadline)? Refuses instances above the small-instance bound
/// (2 cores, 64 flattened slots).
bool feasible_placement_exists(const FlatCells& flat, Slot arrival, Slot deadline, int wcet);

/// Count of idle cells on one core in (arrival, deadline).
Slot count_idle_cells(const FlatCells& flat, int core, Slot arrival, Slot deadline);

struct ReplayArrival {
    Slot slot;
    int task;
    int actual = 0;  // 0: equal to wcet
};

struct ReplayResult {
    /// dispatch[slot][core]: task id, kIdle for an empty slot.
    std::vector<std::vector<int>> dispatch;
    std::vector<bool> admitted;   // per arrival, input order
    std::vector<int> admit_core;  // -1 when rejected
};

/// Direct loop-based restatement of the dispatch priority rules and the
/// first-fit admission policy, independent of the engine's incremental
/// data structures. Compared slot-by-slot against the engine.
ReplayResult replay_policy(
    const SchedulingTable& table, const std::vector<ReplayArrival>& arrivals, Slot n_slots,
    const std::function<int(const TaskSpec&, int job_index, std::int64_t cycle)>& actual_fn = nullptr);

}  // namespace oracle
}  // namespace slotshift
