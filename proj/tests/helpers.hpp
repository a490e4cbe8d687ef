#pragma once

#include <vector>

#include "slotshift/model.hpp"
#include "slotshift/rng.hpp"
#include "slotshift/tablegen.hpp"

namespace testutil {

using namespace slotshift;

// Reference single-core fixture: row [A,A,IDLE,B,B,IDLE] over horizon 6,
// with three aperiodic probes of task ids 10..12.
inline constexpr int kA = 0;
inline constexpr int kB = 1;
inline constexpr int kJ = 10;   // wcet 2, deadline 6: fits in both idle cells
inline constexpr int kJ2 = 11;  // wcet 1, deadline 3: fits in the first idle cell
inline constexpr int kJ3 = 12;  // wcet 2, deadline 3: only one idle cell before 3

inline TaskSpec ap_task(int id, int wcet, Slot deadline) {
    TaskSpec t;
    t.id = id;
    t.name = "J" + std::to_string(id);
    t.kind = TaskKind::Aperiodic;
    t.wcet = wcet;
    t.relative_deadline = deadline;
    return t;
}

inline SchedulingTable make_s1() {
    SystemConfig sys;
    sys.total_cores = 2;
    sys.tt_cores = 1;
    sys.horizon = 6;

    TaskSpec a;
    a.id = kA;
    a.name = "A";
    a.wcet = 2;
    a.period = 6;
    a.relative_deadline = 3;
    a.release = 0;

    TaskSpec b;
    b.id = kB;
    b.name = "B";
    b.wcet = 2;
    b.period = 6;
    b.relative_deadline = 3;
    b.release = 3;

    auto table = build_table({a, b}, sys).table;
    table.tasks.push_back(ap_task(kJ, 2, 6));
    table.tasks.push_back(ap_task(kJ2, 1, 3));
    table.tasks.push_back(ap_task(kJ3, 2, 3));
    return table;
}

// Random small instance: <= 2 cores, <= 24 slots, <= 6 tasks. The offline
// tasks are drawn so the per-core EDF layout always succeeds.
struct SmallInstance {
    SchedulingTable table;
    std::vector<TaskSpec> ap_tasks;  // also present in table.tasks
};

inline SmallInstance make_small_instance(std::uint64_t seed) {
    Rng rng(seed);
    SystemConfig sys;
    sys.tt_cores = static_cast<int>(rng.uniform_int(1, 2));
    sys.total_cores = sys.tt_cores + 1;
    sys.horizon = rng.uniform_int(8, 24);

    const int n_offline = static_cast<int>(rng.uniform_int(1, 4));
    std::vector<TaskSpec> tasks;
    for (int i = 0; i < n_offline; ++i) {
        TaskSpec t;
        t.id = i;
        t.name = "T" + std::to_string(i);
        t.period = rng.uniform_int(4, sys.horizon);
        // At most half the period of work keeps random sets feasible under
        // low per-core packing.
        t.wcet = static_cast<int>(rng.uniform_int(1, std::max<Slot>(1, t.period / 3)));
        t.relative_deadline = rng.uniform_int(t.wcet, t.period);
        t.release = 0;
        t.assigned_core = static_cast<int>(rng.uniform_int(0, sys.tt_cores - 1));
        tasks.push_back(t);
    }

    SmallInstance inst;
    for (int tries = 0;; ++tries) {
        try {
            inst.table = build_table(tasks, sys).table;
            break;
        } catch (const InfeasibleError&) {
            // Thin out the densest core and retry.
            for (auto& t : tasks) t.wcet = std::max(1, t.wcet - 1);
            if (tries > 8) {
                tasks.resize(1);
                tasks[0].wcet = 1;
            }
        }
    }

    const int n_ap = static_cast<int>(rng.uniform_int(1, 2));
    for (int i = 0; i < n_ap; ++i) {
        TaskSpec t = ap_task(100 + i, static_cast<int>(rng.uniform_int(1, 3)),
                             rng.uniform_int(2, sys.horizon));
        inst.ap_tasks.push_back(t);
        inst.table.tasks.push_back(t);
    }
    return inst;
}

}  // namespace testutil
