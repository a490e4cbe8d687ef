#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "slotshift/model.hpp"
#include "slotshift/sim.hpp"
#include "slotshift/trace.hpp"

namespace slotshift {

/// Experiment campaign parameters. Defaults mirror the evaluation setup:
/// 50 task sets, 5 repetitions, horizon drawn in [480, 520], 3 ms slots,
/// 15 TT cores plus one manager core, 50% offline + 50% aperiodic target
/// utilization with the tabulated WCET/period ranges.
struct CampaignConfig {
    std::uint64_t seed = 1;
    int n_tasksets = 50;
    int repetitions = 5;
    int total_cores = 16;
    int tt_cores = 15;
    double slot_ms = 3.0;
    Slot horizon_lo = 480;
    Slot horizon_hi = 520;
    double offline_util_per_core = 0.5;
    double aperiodic_util_per_core = 0.5;
    int n_offline_tasks = 25;
    int n_aperiodic_tasks = 8;
    int offline_wcet_lo = 1, offline_wcet_hi = 15;
    Slot offline_period_lo = 15, offline_period_hi = 50;
    int ap_wcet_lo = 10, ap_wcet_hi = 15;
    Slot ap_period_lo = 10, ap_period_hi = 15;
    ExecutionModel execution_model = ExecutionModel::Early;
    double overrun_prob = 0.0;
    int threads = 0;          // 0: hardware concurrency
    int verify_sample = 4;    // replay-verify every k-th cell; 0 disables
    std::string out_dir;      // empty: in-memory only

    nlohmann::ordered_json to_json() const;
    static CampaignConfig from_json(const nlohmann::json& j);
};

struct CellResult {
    int taskset = 0;
    int repetition = 0;
    bool infeasible = false;
    MetricsReport metrics;
    bool verified = false;
    bool verify_ok = true;
};

struct CampaignResult {
    std::vector<CellResult> cells;  // ordered by (taskset, repetition)
    std::int64_t total_core_slots = 0;
    std::int64_t total_deadline_misses = 0;
    std::int64_t total_admitted = 0;
    std::int64_t total_rejected = 0;
    std::int64_t infeasible_tables = 0;
    std::int64_t verify_divergences = 0;

    nlohmann::ordered_json summary_json(const CampaignConfig& config) const;
    std::string cells_csv() const;
};

/// Run the full campaign: generate -> build-table -> simulate x R ->
/// verify(sample) -> aggregate. Cells execute on a worker pool; results
/// merge by cell key, so output is independent of scheduling order.
CampaignResult run_campaign(const CampaignConfig& config);

/// Build the artifacts of one taskset cell (shared with the CLI).
struct TasksetArtifacts {
    SystemConfig system;
    std::vector<TaskSpec> tasks;  // offline + aperiodic
    SchedulingTable table;
    bool infeasible = false;
    std::string infeasible_reason;
};
TasksetArtifacts build_taskset(const CampaignConfig& config, int taskset_index);

}  // namespace slotshift
