#include "slotshift/oracle.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace slotshift {
namespace oracle {

std::vector<std::vector<Interval>> recompute_sc_from_table(const SchedulingTable& table) {
    std::vector<std::vector<Interval>> out(table.cells.size());
    for (std::size_t core = 0; core < table.cells.size(); ++core) {
        const auto& row = table.cells[core];
        Slot s = 0;
        while (s < static_cast<Slot>(row.size())) {
            Interval iv;
            iv.core = static_cast<int>(core);
            iv.start = s;
            iv.owner = row[s];
            Slot idle = 0;
            while (s < static_cast<Slot>(row.size()) && row[s] == iv.owner) {
                if (row[s] == kIdle) ++idle;
                ++s;
            }
            iv.end = s;
            iv.offline_sc = idle;
            iv.runtime_sc = idle;
            out[core].push_back(iv);
        }
    }
    return out;
}

Slot count_idle_cells(const FlatCells& flat, int core, Slot arrival, Slot deadline) {
    Slot n = 0;
    for (Slot t = arrival + 1; t < deadline; ++t) {
        if (t < flat.offset || t >= flat.end()) continue;
        if (flat.cells[core][t - flat.offset] == kIdle) ++n;
    }
    return n;
}

bool feasible_placement_exists(const FlatCells& flat, Slot arrival, Slot deadline, int wcet) {
    if (flat.cells.size() > 2 || (!flat.cells.empty() && flat.cells[0].size() > 64))
        throw std::invalid_argument("feasible_placement_exists: instance above size bound");
    if (wcet <= 0) return true;
    for (std::size_t core = 0; core < flat.cells.size(); ++core)
        if (count_idle_cells(flat, static_cast<int>(core), arrival, deadline) >= wcet) return true;
    return false;
}

namespace {

struct RJob {
    int task;
    int job_index;
    TaskKind kind;
    int core;
    Slot release;
    Slot deadline;
    int wcet;
    int actual;
    int executed = 0;
    bool done = false;
    std::vector<Slot> cells;  // absolute, ascending
};

}  // namespace

ReplayResult replay_policy(
    const SchedulingTable& table, const std::vector<ReplayArrival>& arrivals, Slot n_slots,
    const std::function<int(const TaskSpec&, int job_index, std::int64_t cycle)>& actual_fn) {
    const SystemConfig& cfg = table.config;
    const Slot H = cfg.horizon;
    const std::int64_t n_cycles = n_slots / H + 2;
    const Slot total = n_cycles * H;

    // Absolute timeline tiled from the cyclic table.
    std::vector<std::vector<int>> cells(cfg.tt_cores, std::vector<int>(total, -1));
    std::vector<RJob> jobs;
    for (std::int64_t cycle = 0; cycle < n_cycles; ++cycle) {
        const Slot base = cycle * H;
        for (int core = 0; core < cfg.tt_cores; ++core) {
            std::map<int, std::vector<Slot>> per_task;
            for (Slot s = 0; s < H; ++s)
                if (table.cells[core][s] != kIdle) per_task[table.cells[core][s]].push_back(s);
            for (auto& [tid, slots] : per_task) {
                const TaskSpec* t = table.find_task(tid);
                if (!t || !t->is_periodic()) continue;
                std::size_t next = 0;
                for (Slot r = t->release, k = 0; r < H; r += t->period, ++k) {
                    if (r + t->relative_deadline > H) continue;
                    RJob j;
                    j.task = tid;
                    j.job_index = static_cast<int>(k);
                    j.kind = t->kind;
                    j.core = core;
                    j.release = base + r;
                    j.deadline = base + r + t->relative_deadline;
                    j.wcet = t->wcet;
                    j.actual = actual_fn ? actual_fn(*t, j.job_index, cycle) : t->wcet;
                    for (int w = 0; w < t->wcet && next < slots.size(); ++w, ++next) {
                        j.cells.push_back(base + slots[next]);
                        cells[core][base + slots[next]] = static_cast<int>(jobs.size());
                    }
                    jobs.push_back(std::move(j));
                }
            }
        }
    }

    std::vector<int> be_pool;
    for (const auto& t : table.tasks)
        if (t.kind == TaskKind::BestEffort) be_pool.push_back(t.id);
    std::sort(be_pool.begin(), be_pool.end());

    std::map<int, int> ap_count;
    ReplayResult result;
    result.dispatch.assign(n_slots, std::vector<int>(cfg.tt_cores, kIdle));
    result.admitted.assign(arrivals.size(), false);
    result.admit_core.assign(arrivals.size(), -1);

    auto finish = [&](RJob& j, Slot now) {
        j.done = true;
        for (Slot t : j.cells)
            if (t > now) cells[j.core][t] = -1;
        j.cells.clear();
    };

    for (Slot s = 0; s < n_slots; ++s) {
        // Admissions at this boundary, first-fit over cores ascending.
        for (std::size_t a = 0; a < arrivals.size(); ++a) {
            if (arrivals[a].slot != s) continue;
            const TaskSpec* t = table.find_task(arrivals[a].task);
            if (!t) continue;
            const Slot dl = s + t->relative_deadline;
            RJob j;
            j.task = t->id;
            j.job_index = ap_count[t->id]++;
            j.kind = TaskKind::Aperiodic;
            j.release = s;
            j.deadline = dl;
            j.wcet = t->wcet;
            j.actual = arrivals[a].actual > 0 ? arrivals[a].actual : t->wcet;
            const Slot cap = (s / H + 2) * H;
            if (dl <= cap) {
                for (int core = 0; core < cfg.tt_cores && !result.admitted[a]; ++core) {
                    std::vector<Slot> free;
                    for (Slot t2 = s + 1; t2 < dl; ++t2)
                        if (cells[core][t2] < 0) free.push_back(t2);
                    if (static_cast<Slot>(free.size()) >= j.wcet) {
                        j.core = core;
                        for (int w = 0; w < j.wcet; ++w) {
                            j.cells.push_back(free[w]);
                            cells[core][free[w]] = static_cast<int>(jobs.size());
                        }
                        result.admitted[a] = true;
                        result.admit_core[a] = core;
                    }
                }
            }
            if (result.admitted[a]) jobs.push_back(std::move(j));
        }

        // Dispatch rules per core, ascending; distinct BE tasks per slot.
        int be_used = 0;
        std::vector<int> ran(cfg.tt_cores, -1);
        for (int core = 0; core < cfg.tt_cores; ++core) {
            int pick = -1;
            const int owner = cells[core][s];
            if (owner >= 0 && !jobs[owner].done) {
                pick = owner;
            } else {
                // Lend the spare cell: guaranteed aperiodic first, then a
                // released table job pulled forward, then best-effort.
                for (int pass = 0; pass < 2 && pick < 0; ++pass) {
                    Slot best_dl = 0;
                    int best_task = 0;
                    for (std::size_t i = 0; i < jobs.size(); ++i) {
                        const RJob& j = jobs[i];
                        const bool ap = j.kind == TaskKind::Aperiodic;
                        if (j.done || j.core != core || j.release > s) continue;
                        if ((pass == 0) != ap) continue;
                        if (pick < 0 || j.deadline < best_dl ||
                            (j.deadline == best_dl && j.task < best_task)) {
                            pick = static_cast<int>(i);
                            best_dl = j.deadline;
                            best_task = j.task;
                        }
                    }
                }
                if (pick >= 0) cells[core][s] = pick;
            }
            if (pick >= 0) {
                result.dispatch[s][core] = jobs[pick].task;
                ran[core] = pick;
            } else if (be_used < static_cast<int>(be_pool.size())) {
                result.dispatch[s][core] = be_pool[be_used++];
            }
        }
        // End of slot: consume demand, release leftover cells.
        for (int core = 0; core < cfg.tt_cores; ++core) {
            if (ran[core] < 0) continue;
            RJob& j = jobs[ran[core]];
            ++j.executed;
            if (j.actual <= j.wcet && j.executed == j.actual)
                finish(j, s);
            else if (j.executed == j.wcet && j.actual > j.wcet)
                finish(j, s);  // overrun cutoff
        }
    }
    return result;
}

}  // namespace oracle
}  // namespace slotshift
