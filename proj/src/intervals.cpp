#include "slotshift/intervals.hpp"

namespace slotshift {

std::vector<Interval> compute_intervals(const SchedulingTable& table, int core) {
    const auto& row = table.cells.at(core);
    std::vector<Interval> out;
    const Slot horizon = static_cast<Slot>(row.size());
    Slot start = 0;
    while (start < horizon) {
        Slot end = start + 1;
        while (end < horizon && row[end] == row[start]) ++end;
        Interval iv;
        iv.core = core;
        iv.start = start;
        iv.end = end;
        iv.owner = row[start];
        iv.offline_sc = (iv.owner == kIdle) ? iv.length() : 0;
        iv.runtime_sc = iv.offline_sc;
        out.push_back(iv);
        start = end;
    }
    return out;
}

Slot total_sc(const std::vector<Interval>& intervals) {
    Slot sum = 0;
    for (const auto& iv : intervals) sum += iv.offline_sc;
    return sum;
}

}  // namespace slotshift
