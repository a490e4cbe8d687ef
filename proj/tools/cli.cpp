#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "slotshift/campaign.hpp"
#include "slotshift/intervals.hpp"
#include "slotshift/json_io.hpp"
#include "slotshift/oracle.hpp"
#include "slotshift/sim.hpp"
#include "slotshift/tablegen.hpp"
#include "slotshift/workload.hpp"

namespace fs = std::filesystem;
using namespace slotshift;

namespace {

struct CommonOpts {
    std::uint64_t seed = 1;
    int cores = 16;
    int tt_cores = 15;
    double slot_ms = 3.0;
    Slot horizon = 500;
    std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--seed", o.seed, "Random seed");
    cmd->add_option("--cores", o.cores, "Total core count (one reserved for the manager)");
    cmd->add_option("--tt-cores", o.tt_cores, "Time-triggered core count");
    cmd->add_option("--slot-ms", o.slot_ms, "Slot length in milliseconds");
    cmd->add_option("--horizon", o.horizon, "Table cycle length in slots");
    cmd->add_option("--out-dir", o.out_dir, "Output directory");
}

SystemConfig to_system(const CommonOpts& o) {
    SystemConfig c;
    c.total_cores = o.cores;
    c.tt_cores = o.tt_cores;
    c.slot_ms = o.slot_ms;
    c.horizon = o.horizon;
    if (!c.valid()) throw CLI::ValidationError("invalid core/horizon configuration");
    return c;
}

Provenance make_prov(const CommonOpts& o, const nlohmann::ordered_json& extra = {}) {
    Provenance p;
    p.seed = o.seed;
    p.config = {{"cores", o.cores},
                {"tt_cores", o.tt_cores},
                {"slot_ms", o.slot_ms},
                {"horizon", o.horizon}};
    if (!extra.empty())
        for (auto& [k, v] : extra.items()) p.config[k] = v;
    return p;
}

void write_out(const fs::path& dir, const std::string& name, const nlohmann::ordered_json& j) {
    fs::create_directories(dir);
    write_json_file((dir / name).string(), j);
    std::cout << (dir / name).string() << "\n";
}

void write_text(const fs::path& dir, const std::string& name, const std::string& text) {
    fs::create_directories(dir);
    std::ofstream os(dir / name, std::ios::binary);
    os << text;
    std::cout << (dir / name).string() << "\n";
}

int cmd_generate(const CommonOpts& o, int n_offline, int n_ap, double util, double ap_util,
                 const std::string& out_name) {
    const SystemConfig sys = to_system(o);
    Rng root(o.seed);

    WorkloadParams off;
    off.n_tasks = n_offline;
    off.total_utilization = util * sys.tt_cores;
    off.seed = root.fork("offline").next_u64();
    auto tasks = generate_task_set(off, TaskKind::OfflinePeriodic, 0).tasks;

    if (n_ap > 0) {
        WorkloadParams ap;
        ap.n_tasks = n_ap;
        ap.total_utilization = ap_util * sys.tt_cores;
        ap.wcet_lo = 10;
        ap.wcet_hi = 15;
        ap.period_lo = 10;
        ap.period_hi = 15;
        ap.seed = root.fork("aperiodic").next_u64();
        auto aps = generate_task_set(ap, TaskKind::Aperiodic, n_offline).tasks;
        tasks.insert(tasks.end(), aps.begin(), aps.end());
    }

    const auto report = validate_task_set(tasks, sys);
    for (const auto& v : report.violations)
        std::cerr << "warning: task " << v.task_id << ": " << v.message << "\n";

    write_out(o.out_dir, out_name,
              taskset_to_json(sys, tasks, make_prov(o, {{"offline_util", util}, {"aperiodic_util", ap_util}})));
    return 0;
}

int cmd_build_table(const CommonOpts& o, const std::string& taskset_path, const std::string& out_name) {
    auto [sys, tasks] = taskset_from_json(read_json_file(taskset_path));
    std::vector<TaskSpec> offline;
    for (const auto& t : tasks)
        if (t.is_periodic()) offline.push_back(t);
    try {
        auto result = build_table(offline, sys);
        // keep aperiodic task specs alongside the table for simulation
        for (const auto& t : tasks)
            if (!t.is_periodic()) result.table.tasks.push_back(t);
        auto j = table_to_json(result.table, make_prov(o));
        if (!result.truncated_jobs.empty()) {
            auto arr = nlohmann::ordered_json::array();
            for (auto [task, job] : result.truncated_jobs) arr.push_back({{"task", task}, {"job", job}});
            j["truncated_jobs"] = arr;
        }
        write_out(o.out_dir, out_name, j);
        return 0;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    }
}

int cmd_analyze(const std::string& table_path) {
    const SchedulingTable table = table_from_json(read_json_file(table_path));
    nlohmann::ordered_json out;
    out["horizon"] = table.config.horizon;
    out["tt_cores"] = table.config.tt_cores;
    Slot total_idle = 0;
    out["cores"] = nlohmann::ordered_json::array();
    for (int core = 0; core < table.config.tt_cores; ++core) {
        const auto ivs = compute_intervals(table, core);
        nlohmann::ordered_json cj;
        cj["core"] = core;
        cj["idle_cells"] = table.idle_cells(core);
        cj["intervals"] = nlohmann::ordered_json::array();
        for (const auto& iv : ivs)
            cj["intervals"].push_back({{"start", iv.start},
                                       {"end", iv.end},
                                       {"owner", iv.owner},
                                       {"spare_capacity", iv.offline_sc}});
        total_idle += table.idle_cells(core);
        out["cores"].push_back(std::move(cj));
    }
    out["total_spare_capacity"] = total_idle;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_simulate(const CommonOpts& o, const std::string& table_path, Slot n_slots, double overrun_prob,
                 bool nominal, const std::string& prefix) {
    const SchedulingTable table = table_from_json(read_json_file(table_path));
    SimOptions opts;
    opts.seed = o.seed;
    opts.n_slots = n_slots;
    opts.execution_model = nominal ? ExecutionModel::Nominal : ExecutionModel::Early;
    opts.overrun_prob = overrun_prob;
    const SimResult sim = simulate(table, opts);

    fs::create_directories(o.out_dir);
    const fs::path dir(o.out_dir);
    sim.trace.flush_to_file((dir / (prefix + "trace.jsonl")).string(), {{"seed", o.seed}});
    std::cout << (dir / (prefix + "trace.jsonl")).string() << "\n";
    write_out(dir, prefix + "metrics.json", sim.metrics.to_json());
    write_text(dir, prefix + "metrics.csv", sim.metrics.to_csv());
    write_text(dir, prefix + "timeline.csv", timeline_csv(sim.trace.events()));
    std::cout << sim.metrics.to_json().dump(2) << "\n";
    return sim.metrics.deadline_misses == 0 ? 0 : 3;
}

int cmd_admit(const CommonOpts& o, const std::string& table_path, int wcet, Slot deadline, Slot at_slot) {
    SchedulingTable table = table_from_json(read_json_file(table_path));
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
    const AdmissionOutcome out = engine.admit(job);

    nlohmann::ordered_json j;
    j["slot"] = at_slot;
    j["wcet"] = wcet;
    j["deadline"] = deadline;
    j["admitted"] = out.admitted;
    j["core"] = out.core;
    j["best_available_sc"] = out.best_available_sc;
    if (out.admitted) {
        auto cells = nlohmann::ordered_json::array();
        for (Slot s : engine.job(job).owned_cells) cells.push_back(s);
        j["reserved_slots"] = cells;
    }
    std::cout << j.dump(2) << "\n";
    return out.admitted ? 0 : 4;
}

int cmd_verify(const CommonOpts& o, const std::string& table_path, int samples) {
    const SchedulingTable table = table_from_json(read_json_file(table_path));

    // spare capacity conservation against a direct recount
    const auto oracle_ivs = oracle::recompute_sc_from_table(table);
    for (int core = 0; core < table.config.tt_cores; ++core) {
        const auto ivs = compute_intervals(table, core);
        if (ivs != oracle_ivs[core]) {
            std::cout << "FAIL interval-recompute core=" << core << "\n";
            return 5;
        }
        Slot sc = 0;
        for (const auto& iv : ivs) sc += iv.offline_sc;
        if (sc != table.idle_cells(core)) {
            std::cout << "FAIL sc-conservation core=" << core << "\n";
            return 5;
        }
    }
    std::cout << "PASS sc-conservation\n";

    // sampled engine vs replay dispatch equivalence
    int divergences = 0;
    for (int i = 0; i < samples; ++i) {
        SimOptions opts;
        opts.seed = Rng(o.seed).fork("verify", static_cast<std::uint64_t>(i)).next_u64();
        opts.execution_model = ExecutionModel::Early;
        const SimResult sim = simulate(table, opts);

        std::vector<oracle::ReplayArrival> arrivals;
        for (std::size_t k = 0; k < sim.arrivals.size(); ++k) {
            const TaskSpec* t = table.find_task(sim.arrivals[k].task);
            arrivals.push_back({sim.arrivals[k].slot, sim.arrivals[k].task,
                                t ? draw_actual(*t, static_cast<int>(k), -1, opts.seed,
                                                opts.execution_model, 0.0)
                                  : 0});
        }
        const auto replay = oracle::replay_policy(
            table, arrivals, sim.slots_run,
            [&](const TaskSpec& t, int job_index, std::int64_t cycle) {
                return draw_actual(t, job_index, cycle, opts.seed, opts.execution_model, 0.0);
            });
        for (const auto& ev : sim.trace.events()) {
            if (ev.kind != EventKind::Dispatch) continue;
            if (ev.slot >= static_cast<Slot>(replay.dispatch.size()) ||
                replay.dispatch[ev.slot][ev.core] != ev.task) {
                ++divergences;
                break;
            }
        }
    }
    if (divergences == 0) {
        std::cout << "PASS dispatch-replay (" << samples << " samples)\n";
        return 0;
    }
    std::cout << "FAIL dispatch-replay (" << divergences << "/" << samples << " diverged)\n";
    return 5;
}

int cmd_report(const std::string& trace_path, const std::string& format) {
    std::ifstream is(trace_path, std::ios::binary);
    if (!is) {
        std::cerr << "cannot open: " << trace_path << "\n";
        return 1;
    }
    const auto events = read_trace(is);
    const MetricsReport m = compute_metrics(events);
    if (format == "csv")
        std::cout << m.to_csv();
    else if (format == "timeline")
        std::cout << timeline_csv(events);
    else
        std::cout << m.to_json().dump(2) << "\n";
    return 0;
}

int cmd_experiment(const CommonOpts& o, int n_tasksets, int repetitions, int verify_sample,
                   double overrun_prob, int threads) {
    CampaignConfig cfg;
    cfg.seed = o.seed;
    cfg.n_tasksets = n_tasksets;
    cfg.repetitions = repetitions;
    cfg.total_cores = o.cores;
    cfg.tt_cores = o.tt_cores;
    cfg.slot_ms = o.slot_ms;
    cfg.verify_sample = verify_sample;
    cfg.overrun_prob = overrun_prob;
    cfg.threads = threads;
    cfg.out_dir = o.out_dir;
    const CampaignResult result = run_campaign(cfg);
    std::cout << result.summary_json(cfg).dump(2) << "\n";
    if (result.verify_divergences > 0) return 5;
    return result.total_deadline_misses == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic table-driven scheduling with runtime slot shifting"};
    app.require_subcommand(1);

    CommonOpts o;

    auto* gen = app.add_subcommand("generate", "Generate a task set document");
    add_common(gen, o);
    int n_offline = 25, n_ap = 8;
    double util = 0.5, ap_util = 0.5;
    std::string out_name = "taskset.json";
    gen->add_option("--offline-tasks", n_offline, "Offline periodic task count");
    gen->add_option("--aperiodic-tasks", n_ap, "Aperiodic task count");
    gen->add_option("--util", util, "Offline utilization per TT core");
    gen->add_option("--aperiodic-util", ap_util, "Aperiodic utilization per TT core");
    gen->add_option("--out", out_name, "Output file name");

    auto* bt = app.add_subcommand("build-table", "Build the cyclic scheduling table");
    add_common(bt, o);
    std::string taskset_path = "taskset.json", table_name = "table.json";
    bt->add_option("taskset", taskset_path, "Task set document")->required();
    bt->add_option("--out", table_name, "Output file name");

    auto* an = app.add_subcommand("analyze", "Print capacity intervals and spare capacity");
    std::string table_path = "table.json";
    an->add_option("table", table_path, "Table document")->required();

    auto* sim = app.add_subcommand("simulate", "Run the slot-shifting simulation");
    add_common(sim, o);
    Slot n_slots = 0;
    double overrun_prob = 0.0;
    bool nominal = false;
    std::string prefix;
    sim->add_option("table", table_path, "Table document")->required();
    sim->add_option("--slots", n_slots, "Slots to simulate (0: one cycle)");
    sim->add_option("--overrun-prob", overrun_prob, "Overrun injection probability");
    sim->add_flag("--nominal", nominal, "Jobs run for their full WCET");
    sim->add_option("--prefix", prefix, "Output file name prefix");

    auto* ad = app.add_subcommand("admit", "Probe admission of one aperiodic job");
    add_common(ad, o);
    int wcet = 1;
    Slot deadline = 10, at_slot = 0;
    ad->add_option("table", table_path, "Table document")->required();
    ad->add_option("--wcet", wcet, "Probe WCET in slots");
    ad->add_option("--deadline", deadline, "Probe relative deadline in slots");
    ad->add_option("--at-slot", at_slot, "Arrival slot");

    auto* ve = app.add_subcommand("verify", "Cross-check table and simulation against oracles");
    add_common(ve, o);
    int verify_sample = 4;
    ve->add_option("table", table_path, "Table document")->required();
    ve->add_option("--verify-sample", verify_sample, "Sampled simulation runs to replay");

    auto* re = app.add_subcommand("report", "Metrics from a trace file");
    std::string trace_path, format = "json";
    re->add_option("trace", trace_path, "Trace file (jsonl)")->required();
    re->add_option("--format", format, "json, csv or timeline");

    auto* ex = app.add_subcommand("experiment", "Run a full evaluation campaign");
    add_common(ex, o);
    int n_tasksets = 50, repetitions = 5, threads = 0;
    int exp_verify = 4;
    double exp_overrun = 0.0;
    ex->add_option("--tasksets", n_tasksets, "Task set count");
    ex->add_option("--repetitions", repetitions, "Repetitions per task set");
    ex->add_option("--verify-sample", exp_verify, "Replay-verify every k-th cell (0: off)");
    ex->add_option("--overrun-prob", exp_overrun, "Overrun injection probability");
    ex->add_option("--threads", threads, "Worker threads (0: hardware)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_generate(o, n_offline, n_ap, util, ap_util, out_name);
        if (bt->parsed()) return cmd_build_table(o, taskset_path, table_name);
        if (an->parsed()) return cmd_analyze(table_path);
        if (sim->parsed()) return cmd_simulate(o, table_path, n_slots, overrun_prob, nominal, prefix);
        if (ad->parsed()) return cmd_admit(o, table_path, wcet, deadline, at_slot);
        if (ve->parsed()) return cmd_verify(o, table_path, verify_sample);
        if (re->parsed()) return cmd_report(trace_path, format);
        if (ex->parsed()) return cmd_experiment(o, n_tasksets, repetitions, exp_verify, exp_overrun, threads);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
