#include "slotshift/sim.hpp"

#include <algorithm>

#include "slotshift/rng.hpp"

namespace slotshift {

int draw_actual(const TaskSpec& task, int job_index, std::int64_t cycle, std::uint64_t seed,
                ExecutionModel model, double overrun_prob) {
    // Keyed independently of evaluation order so the engine and the replay
    // oracle draw identical demands.
    Rng rng = Rng(seed).fork("actual", (static_cast<std::uint64_t>(task.id) << 32) ^
                                           (static_cast<std::uint64_t>(cycle) << 16) ^
                                           static_cast<std::uint64_t>(job_index));
    if (overrun_prob > 0.0 && rng.uniform() < overrun_prob)
        return task.wcet + static_cast<int>(rng.uniform_int(1, 3));
    if (model == ExecutionModel::Early && task.wcet > 1)
        return static_cast<int>(rng.uniform_int(1, task.wcet));
    return task.wcet;
}

SimResult simulate(const SchedulingTable& table, const SimOptions& options) {
    SimResult result;
    const Slot horizon = table.config.horizon;
    const Slot n_slots = options.n_slots > 0 ? options.n_slots : horizon;

    if (options.use_external_arrivals) {
        result.arrivals = options.arrivals;
        std::sort(result.arrivals.begin(), result.arrivals.end(), [](const Arrival& a, const Arrival& b) {
            return std::tie(a.slot, a.task) < std::tie(b.slot, b.task);
        });
    } else {
        std::vector<TaskSpec> ap_tasks;
        for (const auto& t : table.tasks)
            if (t.kind == TaskKind::Aperiodic) ap_tasks.push_back(t);
        result.arrivals = generate_arrivals(ap_tasks, n_slots, Rng(options.seed).fork("arrivals").next_u64(),
                                            options.arrival_model);
    }

    EngineOptions eopts;
    eopts.admission_core_policy = options.admission_core_policy;
    eopts.actual_fn = [&](const TaskSpec& t, int job_index, std::int64_t cycle) {
        return draw_actual(t, job_index, cycle, options.seed, options.execution_model,
                           options.overrun_prob);
    };
    Engine engine(table, eopts, &result.trace);
    Dispatcher dispatcher(table.config.tt_cores);

    std::size_t next_arrival = 0;
    std::size_t next_add = 0;
    auto adds = options.periodic_adds;
    std::stable_sort(adds.begin(), adds.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    const Slot hard_stop = n_slots + 2 * horizon;
    std::vector<int> arrival_job_ids;
    Slot s = 0;
    for (; s < hard_stop; ++s) {
        if (s >= n_slots) {
            if (!options.drain_admitted) break;
            bool pending = false;
            for (int id : arrival_job_ids)
                if (id >= 0 && engine.job(id).unfinished()) pending = true;
            if (!pending) break;
        }
        while (next_add < adds.size() && adds[next_add].first <= s) {
            engine.add_periodic_permanent(adds[next_add].second);
            ++next_add;
        }
        std::vector<Engine::ApRequest> reqs;
        while (next_arrival < result.arrivals.size() && result.arrivals[next_arrival].slot == s) {
            const TaskSpec* t = table.find_task(result.arrivals[next_arrival].task);
            int actual = 0;
            if (t)
                actual = draw_actual(*t, static_cast<int>(next_arrival), -1, options.seed,
                                     options.execution_model, options.overrun_prob);
            reqs.push_back({result.arrivals[next_arrival].task, actual});
            ++next_arrival;
        }
        const std::size_t jobs_before = engine.jobs().size();
        engine.run_slot_boundary(reqs);
        // Requests create one job each, in order, starting at jobs_before.
        for (std::size_t i = 0; i < reqs.size(); ++i)
            arrival_job_ids.push_back(static_cast<int>(jobs_before + i));
        dispatcher.execute_slot(engine, &result.trace);
    }
    result.slots_run = s;

    result.arrival_admitted.reserve(arrival_job_ids.size());
    for (int id : arrival_job_ids)
        result.arrival_admitted.push_back(engine.job(id).state != JobState::Rejected);
    result.metrics = compute_metrics(result.trace.events());
    return result;
}

}  // namespace slotshift
