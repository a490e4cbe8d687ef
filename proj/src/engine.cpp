#include "slotshift/engine.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace slotshift {

namespace {

void fnv_mix(std::uint64_t& h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

/// Rebuild the maximal runs covering the neighborhood of `rel_slot` from a
/// cell-owner accessor. A single cell change can only merge or split runs
/// adjacent to it, so touching [prev interval, next interval] is enough.
template <typename OwnerAt>
void resegment_row(std::vector<Interval>& ivs, int core, Slot rel_slot, OwnerAt owner_at) {
    auto it = std::upper_bound(ivs.begin(), ivs.end(), rel_slot,
                               [](Slot s, const Interval& iv) { return s < iv.end; });
    assert(it != ivs.end() && it->start <= rel_slot);
    std::size_t idx = static_cast<std::size_t>(it - ivs.begin());
    std::size_t lo = idx > 0 ? idx - 1 : idx;
    std::size_t hi = idx + 1 < ivs.size() ? idx + 1 : idx;
    const Slot range_lo = ivs[lo].start;
    const Slot range_hi = ivs[hi].end;

    std::vector<Interval> rebuilt;
    Slot start = range_lo;
    while (start < range_hi) {
        Slot end = start + 1;
        const int owner = owner_at(start);
        while (end < range_hi && owner_at(end) == owner) ++end;
        Interval iv;
        iv.core = core;
        iv.start = start;
        iv.end = end;
        iv.owner = owner;
        iv.runtime_sc = (owner == kIdle) ? end - start : 0;
        iv.offline_sc = iv.runtime_sc;
        rebuilt.push_back(iv);
        start = end;
    }
    // Merge across the range edges if the rebuilt border runs continue an
    // untouched neighbor with the same owner.
    if (lo > 0 && ivs[lo - 1].owner == rebuilt.front().owner) {
        rebuilt.front().start = ivs[lo - 1].start;
        rebuilt.front().runtime_sc += ivs[lo - 1].runtime_sc;
        rebuilt.front().offline_sc = rebuilt.front().runtime_sc;
        --lo;
    }
    if (hi + 1 < ivs.size() && ivs[hi + 1].owner == rebuilt.back().owner) {
        rebuilt.back().end = ivs[hi + 1].end;
        rebuilt.back().runtime_sc += ivs[hi + 1].runtime_sc;
        rebuilt.back().offline_sc = rebuilt.back().runtime_sc;
        ++hi;
    }
    ivs.erase(ivs.begin() + static_cast<std::ptrdiff_t>(lo),
              ivs.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    ivs.insert(ivs.begin() + static_cast<std::ptrdiff_t>(lo), rebuilt.begin(), rebuilt.end());
}

}  // namespace

Engine::Engine(SchedulingTable table, EngineOptions opts, TraceWriter* trace)
    : config_(table.config), base_(std::move(table)), horizon_(config_.horizon), opts_(std::move(opts)), trace_(trace) {
    if (!config_.valid()) throw std::invalid_argument("engine: invalid system config");
    base_ivs_.resize(config_.tt_cores);
    for (int c = 0; c < config_.tt_cores; ++c) base_ivs_[c] = compute_intervals(base_, c);
    ready_.resize(config_.tt_cores);
    upcoming_.resize(config_.tt_cores);
    for (const auto& t : base_.tasks)
        if (t.kind == TaskKind::BestEffort) be_pool_.push_back(t.id);
    std::sort(be_pool_.begin(), be_pool_.end());
    build_overlay(overlays_[0], 0);
    build_overlay(overlays_[1], 1);
}

const TaskSpec& Engine::task_spec(int id) const {
    const TaskSpec* t = base_.find_task(id);
    if (!t) throw std::invalid_argument("unknown task id " + std::to_string(id));
    return *t;
}

void Engine::emit(TraceEvent ev) {
    if (trace_) trace_->record(std::move(ev));
}

void Engine::build_overlay(Overlay& ov, std::int64_t cycle) {
    ov.cycle = cycle;
    ov.cells.assign(config_.tt_cores, std::vector<int>(horizon_, kIdle));
    ov.ivs = base_ivs_;
    const Slot base_abs = cycle * horizon_;
    for (int core = 0; core < config_.tt_cores; ++core) {
        // Collect each task's cells on this row in slot order.
        std::map<int, std::vector<Slot>> cells_of;
        for (Slot s = 0; s < horizon_; ++s)
            if (base_.cells[core][s] != kIdle) cells_of[base_.cells[core][s]].push_back(s);
        for (auto& [task_id, cell_list] : cells_of) {
            const TaskSpec& t = task_spec(task_id);
            if (!t.is_periodic()) continue;
            // Constrained deadlines make job windows disjoint, so jobs
            // consume the task's cells sequentially in release order.
            std::size_t next_cell = 0;
            for (Slot r = t.release, k = 0; r < horizon_; r += t.period, ++k) {
                if (r + t.relative_deadline > horizon_) continue;  // truncated at horizon
                JobRec j;
                j.id = static_cast<int>(jobs_.size());
                j.task = task_id;
                j.job_index = static_cast<int>(k);
                j.kind = t.kind;
                j.core = core;
                j.release = base_abs + r;
                j.abs_deadline = base_abs + r + t.relative_deadline;
                j.wcet = t.wcet;
                j.actual = opts_.actual_fn ? opts_.actual_fn(t, j.job_index, cycle) : t.wcet;
                for (int w = 0; w < t.wcet && next_cell < cell_list.size(); ++w, ++next_cell) {
                    ov.cells[core][cell_list[next_cell]] = j.id;
                    j.owned_cells.push_back(base_abs + cell_list[next_cell]);
                }
                release_q_[j.release].push_back(j.id);
                jobs_.push_back(std::move(j));
            }
        }
    }
}

void Engine::rotate_overlays() {
    overlays_[0] = std::move(overlays_[1]);
    overlays_[1] = Overlay{};
    build_overlay(overlays_[1], overlays_[0].cycle + 1);
    emit({current_slot_, -1, EventKind::CycleWrap, kIdle, -1,
          {{"cycle", overlays_[0].cycle}}});
}

void Engine::release_due_jobs() {
    while (!release_q_.empty() && release_q_.begin()->first <= current_slot_) {
        for (int id : release_q_.begin()->second) {
            JobRec& j = jobs_[id];
            if (j.state != JobState::Pending) continue;
            j.state = JobState::Ready;
            ready_[j.core].insert({j.abs_deadline, j.task, j.id});
        }
        release_q_.erase(release_q_.begin());
    }
}

int Engine::submit_aperiodic(int task_id, int actual) {
    const TaskSpec& t = task_spec(task_id);
    if (t.kind != TaskKind::Aperiodic)
        throw std::invalid_argument("submit_aperiodic: task is not aperiodic");
    JobRec j;
    j.id = static_cast<int>(jobs_.size());
    j.task = task_id;
    j.job_index = ap_job_counter_[task_id]++;
    j.kind = TaskKind::Aperiodic;
    j.release = current_slot_;
    j.abs_deadline = current_slot_ + t.relative_deadline;
    j.wcet = t.wcet;
    j.actual = actual > 0 ? actual : t.wcet;
    j.state = JobState::Pending;
    jobs_.push_back(std::move(j));
    return static_cast<int>(jobs_.size()) - 1;
}

AcceptanceDecision Engine::acceptance_test(const JobRec& job, int core) const {
    AcceptanceDecision d;
    d.required = job.wcet;
    // In-progress slot excluded: spare capacity counts from the next slot.
    const Slot window_lo = current_slot_ + 1;
    const Slot window_hi = job.abs_deadline;
    const Slot admission_cap = (overlays_[0].cycle + 2) * horizon_;
    if (window_hi > admission_cap) {
        d.reason = "deadline beyond admission horizon";
        return d;
    }
    for (int o = 0; o < 2; ++o) {
        const Slot base_abs = overlays_[o].cycle * horizon_;
        for (const Interval& iv : overlays_[o].ivs[core]) {
            if (iv.owner != kIdle) continue;
            const Slot lo = std::max(window_lo, base_abs + iv.start);
            const Slot hi = std::min(window_hi, base_abs + iv.end);
            if (lo >= hi) continue;
            d.available_sc += hi - lo;
            for (Slot t = lo; t < hi && static_cast<int>(d.placement.size()) < job.wcet; ++t)
                d.placement.push_back(t);
        }
    }
    d.accepted = d.available_sc >= job.wcet;
    if (!d.accepted) {
        d.placement.clear();
        d.reason = "insufficient spare capacity";
    }
    return d;
}

void Engine::guarantee(int job_id, int core, const AcceptanceDecision& decision) {
    if (!decision.accepted) throw std::logic_error("guarantee: decision not accepted");
    JobRec& j = jobs_[job_id];
    j.core = core;
    j.owned_cells = decision.placement;
    for (Slot t : decision.placement) {
        const int o = static_cast<int>(t / horizon_ - overlays_[0].cycle);
        assert(o == 0 || o == 1);
        assert(overlays_[o].cells[core][t % horizon_] == kIdle);
        set_cell(o, core, t % horizon_, job_id);
    }
    j.state = JobState::Ready;
    ready_[core].insert({j.abs_deadline, j.task, j.id});
}

AdmissionOutcome Engine::admit(int job_id) {
    JobRec& j = jobs_[job_id];
    AdmissionOutcome out;
    if (opts_.admission_core_policy == AdmissionCorePolicy::FirstFit) {
        for (int core = 0; core < config_.tt_cores; ++core) {
            AcceptanceDecision d = acceptance_test(j, core);
            out.best_available_sc = std::max(out.best_available_sc, d.available_sc);
            if (d.accepted) {
                guarantee(job_id, core, d);
                return {true, core, d.available_sc};
            }
        }
    } else {
        int best_core = -1;
        AcceptanceDecision best;
        for (int core = 0; core < config_.tt_cores; ++core) {
            AcceptanceDecision d = acceptance_test(j, core);
            out.best_available_sc = std::max(out.best_available_sc, d.available_sc);
            if (d.accepted && (best_core < 0 || d.available_sc > best.available_sc)) {
                best_core = core;
                best = std::move(d);
            }
        }
        if (best_core >= 0) {
            guarantee(job_id, best_core, best);
            return {true, best_core, best.available_sc};
        }
    }
    j.state = JobState::Rejected;
    return out;
}

void Engine::admit_arrivals(const std::vector<ApRequest>& arrivals) {
    for (const ApRequest& req : arrivals) {
        const int id = submit_aperiodic(req.task, req.actual);
        const JobRec snapshot = jobs_[id];
        const AdmissionOutcome out = admit(id);
        TraceEvent ev;
        ev.slot = current_slot_;
        ev.core = out.core;
        ev.kind = out.admitted ? EventKind::Admit : EventKind::Reject;
        ev.task = snapshot.task;
        ev.job = id;
        ev.detail = {{"wcet", snapshot.wcet},
                     {"deadline", snapshot.abs_deadline},
                     {"available_sc", out.best_available_sc}};
        if (!out.admitted) ev.detail["reason"] = "no capacity";
        if (snapshot.actual != snapshot.wcet) ev.detail["actual"] = snapshot.actual;
        emit(std::move(ev));
    }
}

void Engine::set_cell(int overlay, int core, Slot rel_slot, int job_id) {
    Overlay& ov = overlays_[overlay];
    const int old = ov.cells[core][rel_slot];
    if (old == job_id) return;
    ov.cells[core][rel_slot] = job_id;
    resegment_around(overlay, core, rel_slot);
    const int delta = (job_id == kIdle ? 1 : 0) - (old == kIdle ? 1 : 0);
    if (delta != 0)
        emit({current_slot_, core, EventKind::ScChange, owner_key(job_id == kIdle ? old : job_id), -1,
              {{"cell", ov.cycle * horizon_ + rel_slot}, {"delta", delta}}});
}

void Engine::resegment_around(int overlay, int core, Slot rel_slot) {
    Overlay& ov = overlays_[overlay];
    const auto& row = ov.cells[core];
    resegment_row(ov.ivs[core], core, rel_slot, [&](Slot s) { return owner_key(row[s]); });
}

void Engine::set_upcoming_slot_task(int core) {
    const Slot r = current_slot_ % horizon_;
    DispatchDecision dec;
    const int cell_job = overlays_[0].cells[core][r];
    if (cell_job != kIdle && jobs_[cell_job].unfinished()) {
        dec = {jobs_[cell_job].task, cell_job, false};
    } else {
        // Idle cell (a finished owner released its cells): lend it out.
        int pick_ap = -1, pick_table = -1;
        for (const auto& [dl, task, id] : ready_[core]) {
            const JobRec& j = jobs_[id];
            if (!j.unfinished() || j.release > current_slot_) continue;
            if (j.kind == TaskKind::Aperiodic) {
                if (pick_ap < 0) pick_ap = id;
            } else if (pick_table < 0) {
                pick_table = id;
            }
            if (pick_ap >= 0) break;  // guaranteed aperiodics take precedence
        }
        const int pick = pick_ap >= 0 ? pick_ap : pick_table;
        if (pick >= 0) {
            // Early run / pull-forward consumes this spare cell; the job's
            // own future cell is released when it completes.
            set_cell(0, core, r, pick);
            dec = {jobs_[pick].task, pick, false};
        } else if (be_used_ < static_cast<int>(be_pool_.size())) {
            dec = {be_pool_[be_used_++], -1, true};
        } else {
            dec = {kIdle, -1, false};
        }
    }
    upcoming_[core] = dec;
}

const std::vector<DispatchDecision>& Engine::run_slot_boundary(const std::vector<ApRequest>& arrivals) {
    if (boundary_done_) throw std::logic_error("run_slot_boundary called twice for one slot");
    if (current_slot_ > 0 && current_slot_ % horizon_ == 0 &&
        overlays_[0].cycle != current_slot_ / horizon_)
        rotate_overlays();
    executed_this_slot_.clear();
    release_due_jobs();
    admit_arrivals(arrivals);
    be_used_ = 0;
    for (int core = 0; core < config_.tt_cores; ++core) set_upcoming_slot_task(core);
    boundary_done_ = true;
    return upcoming_;
}

void Engine::note_execution(int core) {
    if (!boundary_done_) throw std::logic_error("note_execution before run_slot_boundary");
    const DispatchDecision& dec = upcoming_[core];
    if (dec.job < 0) return;
    JobRec& j = jobs_[dec.job];
    ++j.executed;
    if (!j.owned_cells.empty() && j.owned_cells.front() == current_slot_)
        j.owned_cells.erase(j.owned_cells.begin());
    executed_this_slot_.push_back(dec.job);
}

void Engine::remove_ready(const JobRec& job) {
    ready_[job.core].erase({job.abs_deadline, job.task, job.id});
}

void Engine::finish_job(JobRec& job, bool overrun) {
    job.state = overrun ? JobState::Overrun : JobState::Complete;
    remove_ready(job);
    // Unneeded reserved cells are returned to spare capacity.
    for (Slot t : job.owned_cells) {
        if (t <= current_slot_) continue;
        const int o = static_cast<int>(t / horizon_ - overlays_[0].cycle);
        if (o < 0 || o > 1) continue;
        set_cell(o, job.core, t % horizon_, kIdle);
    }
    job.owned_cells.clear();
    emit({current_slot_, job.core, overrun ? EventKind::Overrun : EventKind::Complete, job.task,
          job.id, {{"executed", job.executed}, {"deadline", job.abs_deadline}}});
}

void Engine::end_of_slot() {
    if (!boundary_done_) throw std::logic_error("end_of_slot before run_slot_boundary");
    for (int id : executed_this_slot_) {
        JobRec& j = jobs_[id];
        if (!j.unfinished()) continue;
        if (j.actual <= j.wcet && j.executed == j.actual) {
            finish_job(j, false);
        } else if (j.executed == j.wcet && j.actual > j.wcet) {
            // Hard cutoff at reservation exhaustion: isolation over progress.
            finish_job(j, true);
        }
    }
    ++current_slot_;
    boundary_done_ = false;
}

PermanentAddResult Engine::add_periodic_permanent(TaskSpec task) {
    PermanentAddResult result;
    if (task.kind != TaskKind::RuntimePeriodic)
        throw std::invalid_argument("add_periodic_permanent: task must be runtime-periodic");
    if (task.period < 1 || task.relative_deadline < task.wcet || task.relative_deadline > task.period)
        throw std::invalid_argument("add_periodic_permanent: invalid task parameters");
    if (base_.find_task(task.id))
        throw std::invalid_argument("add_periodic_permanent: duplicate task id");

    // Job instances over one cycle; instances whose deadline crosses the
    // horizon are truncated, like tablegen does for offline jobs.
    struct Instance {
        int job_index;
        Slot release;
        Slot deadline;
    };
    std::vector<Instance> instances;
    for (Slot r = task.release, k = 0; r < horizon_; r += task.period, ++k)
        if (r + task.relative_deadline <= horizon_)
            instances.push_back({static_cast<int>(k), r, r + task.relative_deadline});

    for (int core = 0; core < config_.tt_cores; ++core) {
        // Candidate cells must be idle in the cyclic table (offline SC) and
        // unreserved in the next cycle, where the addition takes effect.
        std::vector<std::vector<Slot>> placements;
        bool ok = true;
        int failed = -1;
        for (const Instance& inst : instances) {
            std::vector<Slot> cells;
            for (Slot t = inst.release; t < inst.deadline && static_cast<int>(cells.size()) < task.wcet; ++t)
                if (base_.cells[core][t] == kIdle && overlays_[1].cells[core][t] == kIdle)
                    cells.push_back(t);
            if (static_cast<int>(cells.size()) < task.wcet) {
                ok = false;
                failed = inst.job_index;
                break;
            }
            placements.push_back(std::move(cells));
        }
        if (!ok) {
            result.failed_job_index = failed;
            continue;
        }

        // Commit: cyclic table first, so every future cycle inherits.
        task.assigned_core = core;
        base_.tasks.push_back(task);
        for (const auto& cells : placements)
            for (Slot t : cells) {
                base_.cells[core][t] = task.id;
                resegment_row(base_ivs_[core], core, t,
                              [&](Slot s) { return base_.cells[core][s]; });
            }
        // Instantiate the next cycle's jobs in the working state.
        const Slot next_base = overlays_[1].cycle * horizon_;
        for (std::size_t i = 0; i < instances.size(); ++i) {
            const Instance& inst = instances[i];
            JobRec j;
            j.id = static_cast<int>(jobs_.size());
            j.task = task.id;
            j.job_index = inst.job_index;
            j.kind = TaskKind::RuntimePeriodic;
            j.core = core;
            j.release = next_base + inst.release;
            j.abs_deadline = next_base + inst.deadline;
            j.wcet = task.wcet;
            j.actual = opts_.actual_fn ? opts_.actual_fn(task, j.job_index, overlays_[1].cycle) : task.wcet;
            for (Slot t : placements[i]) j.owned_cells.push_back(next_base + t);
            release_q_[j.release].push_back(j.id);
            const int id = j.id;
            jobs_.push_back(std::move(j));
            for (Slot t : placements[i]) set_cell(1, core, t, id);
        }
        result.accepted = true;
        result.core = core;
        result.failed_job_index = -1;
        result.jobs_placed = static_cast<int>(instances.size());
        emit({current_slot_, core, EventKind::Admit, task.id, -1,
              {{"permanent", true}, {"jobs", result.jobs_placed}}});
        return result;
    }
    emit({current_slot_, -1, EventKind::Reject, task.id, -1,
          {{"permanent", true}, {"failed_job_index", result.failed_job_index}}});
    return result;
}

const std::vector<Interval>& Engine::runtime_intervals(int core, int overlay) const {
    return overlays_[overlay].ivs[core];
}

SchedulingTable Engine::working_table(int overlay) const {
    SchedulingTable t = base_;
    for (int core = 0; core < config_.tt_cores; ++core)
        for (Slot s = 0; s < horizon_; ++s) {
            const int cell = overlays_[overlay].cells[core][s];
            t.cells[core][s] = owner_key(cell);
        }
    return t;
}

std::uint64_t Engine::structural_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    fnv_mix(h, static_cast<std::uint64_t>(current_slot_));
    for (const auto& row : base_.cells)
        for (int c : row) fnv_mix(h, static_cast<std::uint64_t>(c + 2));
    for (const auto& ov : overlays_) {
        fnv_mix(h, static_cast<std::uint64_t>(ov.cycle));
        for (const auto& row : ov.cells)
            for (int c : row) fnv_mix(h, static_cast<std::uint64_t>(c + 2));
        for (const auto& ivs : ov.ivs)
            for (const auto& iv : ivs) {
                fnv_mix(h, static_cast<std::uint64_t>(iv.start));
                fnv_mix(h, static_cast<std::uint64_t>(iv.end));
                fnv_mix(h, static_cast<std::uint64_t>(iv.owner + 2));
                fnv_mix(h, static_cast<std::uint64_t>(iv.runtime_sc));
            }
    }
    for (const auto& rq : ready_)
        for (const auto& [dl, task, id] : rq) {
            fnv_mix(h, static_cast<std::uint64_t>(dl));
            fnv_mix(h, static_cast<std::uint64_t>(task));
            fnv_mix(h, static_cast<std::uint64_t>(id));
        }
    for (const auto& j : jobs_) {
        if (j.state == JobState::Rejected) continue;
        fnv_mix(h, static_cast<std::uint64_t>(j.task));
        fnv_mix(h, static_cast<std::uint64_t>(static_cast<int>(j.state)));
        fnv_mix(h, static_cast<std::uint64_t>(j.executed));
        fnv_mix(h, static_cast<std::uint64_t>(j.core + 2));
        for (Slot t : j.owned_cells) fnv_mix(h, static_cast<std::uint64_t>(t));
    }
    return h;
}

}  // namespace slotshift
