#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "slotshift/model.hpp"
#include "slotshift/rng.hpp"

namespace slotshift {

enum class ArrivalModel { Sporadic, PoissonCapped };

struct WorkloadParams {
    int n_tasks = 1;
    double total_utilization = 0.5;
    int wcet_lo = 1, wcet_hi = 15;
    Slot period_lo = 15, period_hi = 50;
    std::uint64_t seed = 0;

    bool valid() const {
        return n_tasks >= 1 && total_utilization > 0.0 && wcet_lo >= 1 && wcet_lo <= wcet_hi &&
               period_lo >= 1 && period_lo <= period_hi;
    }
};

/// Classic UUnifast: n utilizations summing to total_utilization, drawn with
/// the sumU * r^(1/(n-i)) recurrence. Deterministic in seed.
std::vector<double> uunifast(int n, double total_utilization, Rng& rng);
std::vector<double> uunifast(int n, double total_utilization, std::uint64_t seed);

struct GeneratedTaskSet {
    std::vector<TaskSpec> tasks;
    double target_utilization = 0.0;
    double achieved_utilization = 0.0;  // clamping WCET into range may shift it
};

/// Draw one task per UUnifast share: period uniform in range, wcet =
/// round(U_i * period) clamped into range, deadline = period. Throws if a
/// clamped wcet exceeds its period. `first_id` offsets the dense ids.
GeneratedTaskSet generate_task_set(const WorkloadParams& params, TaskKind kind, int first_id = 0);

struct Arrival {
    Slot slot;
    int task;
};

/// Sporadic arrival streams for aperiodic tasks over [0, horizon): minimum
/// inter-arrival = the task's period field, with model-dependent jitter on
/// top. Output sorted by (slot, task id), deterministic in seed.
std::vector<Arrival> generate_arrivals(const std::vector<TaskSpec>& ap_tasks, Slot horizon,
                                       std::uint64_t seed,
                                       ArrivalModel model = ArrivalModel::Sporadic);

}  // namespace slotshift
