#pragma once

#include <cstdint>
#include <vector>

#include "slotshift/dispatch.hpp"
#include "slotshift/engine.hpp"
#include "slotshift/model.hpp"
#include "slotshift/trace.hpp"
#include "slotshift/workload.hpp"

namespace slotshift {

enum class ExecutionModel {
    Nominal,  // actual = wcet
    Early,    // actual uniform in [1, wcet]
};

struct SimOptions {
    std::uint64_t seed = 0;
    /// Slots to simulate; 0 means one table cycle (the horizon).
    Slot n_slots = 0;
    /// Keep running past n_slots until every admitted aperiodic job has
    /// finished (bounded by one extra cycle).
    bool drain_admitted = true;
    ExecutionModel execution_model = ExecutionModel::Nominal;
    /// Probability that a job is injected with actual > wcet (overrun).
    double overrun_prob = 0.0;
    ArrivalModel arrival_model = ArrivalModel::Sporadic;
    AdmissionCorePolicy admission_core_policy = AdmissionCorePolicy::FirstFit;
    /// Externally supplied arrivals; when empty, streams are generated from
    /// the table's aperiodic tasks and the seed.
    std::vector<Arrival> arrivals;
    bool use_external_arrivals = false;
    /// Runtime-periodic tasks to add permanently at given slots.
    std::vector<std::pair<Slot, TaskSpec>> periodic_adds;
};

struct SimResult {
    TraceWriter trace;
    MetricsReport metrics;
    std::vector<Arrival> arrivals;
    std::vector<bool> arrival_admitted;
    Slot slots_run = 0;
};

/// Drive one engine + dispatcher over the table, deterministically in
/// (table, options.seed).
SimResult simulate(const SchedulingTable& table, const SimOptions& options);

/// The actual-demand draw used by simulate, exposed so the replay oracle
/// can reproduce it exactly.
int draw_actual(const TaskSpec& task, int job_index, std::int64_t cycle, std::uint64_t seed,
                ExecutionModel model, double overrun_prob);

}  // namespace slotshift
