#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include <json.hpp>

#include "slotshift/campaign.hpp"
#include "slotshift/intervals.hpp"
#include "slotshift/json_io.hpp"
#include "slotshift/oracle.hpp"
#include "slotshift/sim.hpp"
#include "slotshift/tablegen.hpp"
#include "slotshift/workload.hpp"

namespace py = pybind11;
using namespace slotshift;

// JSON documents cross the boundary as strings; the python wrapper decodes
// them with the stdlib json module.

namespace {

Provenance prov_for(std::uint64_t seed) {
    Provenance p;
    p.seed = seed;
    return p;
}

std::string py_generate_taskset(std::uint64_t seed, int total_cores, int tt_cores, double slot_ms,
                                Slot horizon, int n_offline, int n_aperiodic, double offline_util,
                                double aperiodic_util) {
    SystemConfig sys{total_cores, tt_cores, slot_ms, horizon};
    if (!sys.valid()) throw std::invalid_argument("invalid system configuration");
    Rng root(seed);

    WorkloadParams off;
    off.n_tasks = n_offline;
    off.total_utilization = offline_util * tt_cores;
    off.seed = root.fork("offline").next_u64();
    auto tasks = generate_task_set(off, TaskKind::OfflinePeriodic, 0).tasks;

    if (n_aperiodic > 0) {
        WorkloadParams ap;
        ap.n_tasks = n_aperiodic;
        ap.total_utilization = aperiodic_util * tt_cores;
        ap.wcet_lo = 10;
        ap.wcet_hi = 15;
        ap.period_lo = 10;
        ap.period_hi = 15;
        ap.seed = root.fork("aperiodic").next_u64();
        auto aps = generate_task_set(ap, TaskKind::Aperiodic, n_offline).tasks;
        tasks.insert(tasks.end(), aps.begin(), aps.end());
    }
    return taskset_to_json(sys, tasks, prov_for(seed)).dump();
}

std::string py_build_table(const std::string& taskset_json, std::uint64_t seed) {
    auto [sys, tasks] = taskset_from_json(nlohmann::json::parse(taskset_json));
    std::vector<TaskSpec> offline;
    for (const auto& t : tasks)
        if (t.is_periodic()) offline.push_back(t);
    auto result = build_table(offline, sys);
    for (const auto& t : tasks)
        if (!t.is_periodic()) result.table.tasks.push_back(t);
    return table_to_json(result.table, prov_for(seed)).dump();
}

std::string py_analyze(const std::string& table_json) {
    const SchedulingTable table = table_from_json(nlohmann::json::parse(table_json));
    nlohmann::ordered_json out;
    out["cores"] = nlohmann::ordered_json::array();
    Slot total = 0;
    for (int core = 0; core < table.config.tt_cores; ++core) {
        nlohmann::ordered_json cj;
        cj["core"] = core;
        cj["idle_cells"] = table.idle_cells(core);
        cj["intervals"] = nlohmann::ordered_json::array();
        for (const auto& iv : compute_intervals(table, core))
            cj["intervals"].push_back({{"start", iv.start},
                                       {"end", iv.end},
                                       {"owner", iv.owner},
                                       {"spare_capacity", iv.offline_sc}});
        total += table.idle_cells(core);
        out["cores"].push_back(std::move(cj));
    }
    out["total_spare_capacity"] = total;
    return out.dump();
}

py::dict py_simulate(const std::string& table_json, std::uint64_t seed, Slot n_slots,
                     double overrun_prob, bool nominal) {
    const SchedulingTable table = table_from_json(nlohmann::json::parse(table_json));
    SimOptions opts;
    opts.seed = seed;
    opts.n_slots = n_slots;
    opts.overrun_prob = overrun_prob;
    opts.execution_model = nominal ? ExecutionModel::Nominal : ExecutionModel::Early;
    const SimResult sim = simulate(table, opts);

    std::ostringstream trace;
    sim.trace.flush(trace, {{"seed", seed}});
    py::dict out;
    out["metrics"] = sim.metrics.to_json().dump();
    out["trace_jsonl"] = trace.str();
    out["timeline_csv"] = timeline_csv(sim.trace.events());
    out["slots_run"] = sim.slots_run;
    return out;
}

py::dict py_admit_probe(const std::string& table_json, int wcet, Slot deadline, Slot at_slot) {
    SchedulingTable table = table_from_json(nlohmann::json::parse(table_json));
    TaskSpec probe;
    probe.id = 100000;
    probe.name = "probe";
    probe.kind = TaskKind::Aperiodic;
    probe.wcet = wcet;
    probe.relative_deadline = deadline;
    table.tasks.push_back(probe);

    Engine engine(table);
    for (Slot s = 0; s < at_slot; ++s) {
        engine.run_slot_boundary();
        for (int c = 0; c < engine.tt_cores(); ++c)
            if (engine.upcoming()[c].task != kIdle) engine.note_execution(c);
        engine.end_of_slot();
    }
    engine.run_slot_boundary();
    const int job = engine.submit_aperiodic(probe.id);
    const AdmissionOutcome res = engine.admit(job);

    py::dict out;
    out["admitted"] = res.admitted;
    out["core"] = res.core;
    out["best_available_sc"] = res.best_available_sc;
    out["reserved_slots"] = engine.job(job).owned_cells;
    return out;
}

std::string py_run_experiment(const std::string& config_json) {
    const CampaignConfig cfg = CampaignConfig::from_json(nlohmann::json::parse(config_json));
    const CampaignResult result = run_campaign(cfg);
    return result.summary_json(cfg).dump();
}

}  // namespace

PYBIND11_MODULE(_slotshift, m) {
    m.doc() = "Table-driven scheduling with runtime slot shifting";

    m.def("uunifast", [](int n, double u, std::uint64_t seed) { return uunifast(n, u, seed); },
          py::arg("n"), py::arg("total_utilization"), py::arg("seed"));
    m.def("generate_taskset", &py_generate_taskset, py::arg("seed") = 1, py::arg("total_cores") = 16,
          py::arg("tt_cores") = 15, py::arg("slot_ms") = 3.0, py::arg("horizon") = 500,
          py::arg("n_offline") = 25, py::arg("n_aperiodic") = 8, py::arg("offline_util") = 0.5,
          py::arg("aperiodic_util") = 0.5);
    m.def("build_table", &py_build_table, py::arg("taskset_json"), py::arg("seed") = 0);
    m.def("analyze", &py_analyze, py::arg("table_json"));
    m.def("simulate", &py_simulate, py::arg("table_json"), py::arg("seed") = 0, py::arg("n_slots") = 0,
          py::arg("overrun_prob") = 0.0, py::arg("nominal") = false);
    m.def("admit_probe", &py_admit_probe, py::arg("table_json"), py::arg("wcet"), py::arg("deadline"),
          py::arg("at_slot") = 0);
    m.def("run_experiment", &py_run_experiment, py::arg("config_json"));
}
