#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "slotshift/intervals.hpp"
#include "slotshift/model.hpp"
#include "slotshift/trace.hpp"

namespace slotshift {

enum class JobState { Pending, Ready, Complete, Rejected, Overrun };

/// One job instance. `actual` is the real demand (may exceed wcet for
/// injected overruns); the manager only ever grants `wcet` slots.
struct JobRec {
    int id = -1;
    int task = -1;
    int job_index = 0;
    TaskKind kind = TaskKind::OfflinePeriodic;
    int core = -1;
    Slot release = 0;
    Slot abs_deadline = 0;
    int wcet = 1;
    int actual = 1;
    int executed = 0;
    JobState state = JobState::Pending;
    /// Reserved table cells not yet reached, absolute slots, ascending.
    std::vector<Slot> owned_cells;

    bool unfinished() const { return state == JobState::Pending || state == JobState::Ready; }
};

struct AcceptanceDecision {
    bool accepted = false;
    Slot available_sc = 0;
    int required = 0;
    std::vector<Slot> placement;  // absolute slots on the tested core
    std::string reason;           // set on rejection
};

struct AdmissionOutcome {
    bool admitted = false;
    int core = -1;
    Slot best_available_sc = 0;  // max over tested cores when rejected
};

struct PermanentAddResult {
    bool accepted = false;
    int core = -1;
    int failed_job_index = -1;
    int jobs_placed = 0;
};

enum class AdmissionCorePolicy { FirstFit, BestFit };

struct EngineOptions {
    AdmissionCorePolicy admission_core_policy = AdmissionCorePolicy::FirstFit;
    /// SSM lead time before the slot boundary, microseconds. Decisions are
    /// modeled as zero-latency at the boundary; this is reporting only.
    double ssm_lead_us = 15.33;
    /// Draws the actual demand for a table job instance; defaults to wcet.
    std::function<int(const TaskSpec&, int job_index, std::int64_t cycle)> actual_fn;
};

struct DispatchDecision {
    int task = kIdle;
    int job = -1;
    bool best_effort = false;
};

/// Runtime slot-shifting manager over a partitioned cyclic table.
///
/// The working state is a pair of per-cycle overlays (current and next
/// cycle) materializing all temporary reservations, plus incremental
/// per-core interval lists carrying spare capacity. The manager advances
/// once per slot boundary; the dispatcher consumes the returned upcoming
/// map and reports execution back via note_execution / end_of_slot.
class Engine {
public:
    struct ApRequest {
        int task;
        int actual = 0;  // 0: equal to wcet
    };

    explicit Engine(SchedulingTable table, EngineOptions opts = {}, TraceWriter* trace = nullptr);

    /// Algorithm steps for one boundary, every TT core in ascending order:
    /// interval/cursor update, ready-queue update, admission of arrivals,
    /// upcoming-slot selection. Call exactly once per slot.
    const std::vector<DispatchDecision>& run_slot_boundary(const std::vector<ApRequest>& arrivals = {});

    /// The dispatched job on `core` consumed one slot.
    void note_execution(int core);

    /// End-of-slot spare capacity update: completions release leftover
    /// reserved cells, overruns are cut off. Advances to the next slot.
    void end_of_slot();

    // -- admission primitives (also used directly by tests and `admit`) --

    /// Create a pending aperiodic job arriving at the current slot.
    int submit_aperiodic(int task_id, int actual = 0);

    /// Pure capacity check on one core: spare capacity between the next
    /// slot and the deadline, with the placement that would be reserved.
    AcceptanceDecision acceptance_test(const JobRec& job, int core) const;

    /// Commit an accepted placement: write reservations into the working
    /// table, split affected intervals, decrement their SC.
    void guarantee(int job_id, int core, const AcceptanceDecision& decision);

    /// Test cores per admission_core_policy and place on the chosen one.
    AdmissionOutcome admit(int job_id);

    /// All-or-nothing permanent addition of a runtime-periodic task against
    /// offline spare capacity; takes effect from the next cycle.
    PermanentAddResult add_periodic_permanent(TaskSpec task);

    // -- introspection --

    Slot current_slot() const { return current_slot_; }
    Slot horizon() const { return horizon_; }
    int tt_cores() const { return config_.tt_cores; }
    const SystemConfig& config() const { return config_; }
    const SchedulingTable& base_table() const { return base_; }
    const std::vector<Interval>& offline_intervals(int core) const { return base_ivs_[core]; }
    /// Incrementally maintained intervals of the working overlay
    /// (0 = current cycle, 1 = next cycle).
    const std::vector<Interval>& runtime_intervals(int core, int overlay = 0) const;
    /// Working overlay materialized with task ids, for oracle recomputation.
    SchedulingTable working_table(int overlay = 0) const;
    const std::vector<JobRec>& jobs() const { return jobs_; }
    const JobRec& job(int id) const { return jobs_.at(id); }
    const std::vector<DispatchDecision>& upcoming() const { return upcoming_; }

    /// Order-sensitive digest of the full mutable state; unchanged by
    /// rejected admissions.
    std::uint64_t structural_hash() const;

private:
    struct Overlay {
        std::int64_t cycle = 0;
        std::vector<std::vector<int>> cells;       // job id or kIdle
        std::vector<std::vector<Interval>> ivs;    // cycle-relative slots
    };

    void build_overlay(Overlay& ov, std::int64_t cycle);
    void rotate_overlays();
    void release_due_jobs();
    void admit_arrivals(const std::vector<ApRequest>& arrivals);
    void set_upcoming_slot_task(int core);
    void set_cell(int overlay, int core, Slot rel_slot, int job_id);
    void resegment_around(int overlay, int core, Slot rel_slot);
    int owner_key(int cell) const { return cell == kIdle ? kIdle : jobs_[cell].task; }
    void finish_job(JobRec& job, bool overrun);
    void remove_ready(const JobRec& job);
    void emit(TraceEvent ev);
    const TaskSpec& task_spec(int id) const;

    SystemConfig config_;
    SchedulingTable base_;
    std::vector<std::vector<Interval>> base_ivs_;
    Slot horizon_ = 1;
    EngineOptions opts_;
    TraceWriter* trace_ = nullptr;

    Overlay overlays_[2];
    std::vector<JobRec> jobs_;
    std::map<Slot, std::vector<int>> release_q_;
    /// Per core, ordered by (abs_deadline, task id, job id).
    std::vector<std::set<std::tuple<Slot, int, int>>> ready_;
    std::vector<int> be_pool_;
    std::map<int, int> ap_job_counter_;

    Slot current_slot_ = 0;
    bool boundary_done_ = false;
    int be_used_ = 0;
    std::vector<DispatchDecision> upcoming_;
    std::vector<int> executed_this_slot_;  // job ids that ran this slot
};

}  // namespace slotshift
