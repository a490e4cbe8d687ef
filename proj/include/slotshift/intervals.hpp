#pragma once

#include <vector>

#include "slotshift/model.hpp"

namespace slotshift {

/// Maximal run of consecutive slots on one core with identical assignment.
/// Spare capacity (SC) counts the idle cells of the run; under the per-core
/// model SC is concentrated in IDLE-owned intervals.
struct Interval {
    int core = 0;
    Slot start = 0;
    Slot end = 0;  // exclusive
    int owner = kIdle;
    Slot offline_sc = 0;
    Slot runtime_sc = 0;

    Slot length() const { return end - start; }
    bool operator==(const Interval&) const = default;
};

/// Segment one core's row into maximal runs; runtime_sc starts at offline_sc.
std::vector<Interval> compute_intervals(const SchedulingTable& table, int core);

/// Sum of offline SC = number of idle cells on the core's row.
Slot total_sc(const std::vector<Interval>& intervals);

}  // namespace slotshift
