#include "slotshift/workload.hpp"

#include <algorithm>
#include <cmath>

namespace slotshift {

std::vector<double> uunifast(int n, double total_utilization, Rng& rng) {
    if (n < 1) throw std::invalid_argument("uunifast: n must be >= 1");
    if (total_utilization <= 0.0) throw std::invalid_argument("uunifast: utilization must be > 0");
    std::vector<double> out;
    out.reserve(n);
    double sum = total_utilization;
    for (int i = 1; i < n; ++i) {
        const double next = sum * std::pow(rng.uniform_open(), 1.0 / static_cast<double>(n - i));
        out.push_back(sum - next);
        sum = next;
    }
    out.push_back(sum);
    return out;
}

std::vector<double> uunifast(int n, double total_utilization, std::uint64_t seed) {
    Rng rng(seed);
    return uunifast(n, total_utilization, rng);
}

GeneratedTaskSet generate_task_set(const WorkloadParams& params, TaskKind kind, int first_id) {
    if (!params.valid()) throw std::invalid_argument("generate_task_set: invalid params");
    Rng rng(params.seed);
    Rng util_rng = rng.fork("uunifast");
    Rng period_rng = rng.fork("periods");

    GeneratedTaskSet set;
    set.target_utilization = params.total_utilization;
    const auto utils = uunifast(params.n_tasks, params.total_utilization, util_rng);
    for (int i = 0; i < params.n_tasks; ++i) {
        TaskSpec t;
        t.id = first_id + i;
        t.name = std::string(kind == TaskKind::Aperiodic ? "AP" : "T") + std::to_string(t.id);
        t.kind = kind;
        t.period = period_rng.uniform_int(params.period_lo, params.period_hi);
        const auto raw = static_cast<int>(std::llround(utils[i] * static_cast<double>(t.period)));
        // The period caps the range: a UUnifast share above 1 would otherwise
        // produce a job that cannot fit before its own deadline.
        const int hi = static_cast<int>(std::min<Slot>(params.wcet_hi, t.period));
        if (params.wcet_lo > hi)
            throw std::runtime_error("generate_task_set: wcet floor " + std::to_string(params.wcet_lo) +
                                     " exceeds period " + std::to_string(t.period));
        t.wcet = std::clamp(raw, params.wcet_lo, hi);
        t.relative_deadline = t.period;
        t.release = 0;
        set.achieved_utilization += static_cast<double>(t.wcet) / static_cast<double>(t.period);
        set.tasks.push_back(std::move(t));
    }
    return set;
}

std::vector<Arrival> generate_arrivals(const std::vector<TaskSpec>& ap_tasks, Slot horizon,
                                       std::uint64_t seed, ArrivalModel model) {
    if (horizon < 1) throw std::invalid_argument("generate_arrivals: horizon must be >= 1");
    std::vector<Arrival> out;
    Rng base(seed);
    for (const auto& t : ap_tasks) {
        Rng rng = base.fork("arrivals", static_cast<std::uint64_t>(t.id));
        const Slot min_gap = std::max<Slot>(1, t.period);
        // First arrival jittered inside the first inter-arrival window.
        Slot at = rng.uniform_int(0, min_gap - 1);
        while (at < horizon) {
            out.push_back({at, t.id});
            Slot gap;
            if (model == ArrivalModel::Sporadic) {
                gap = min_gap + rng.uniform_int(0, min_gap);
            } else {
                // Exponential gap with mean 1.5 * min_gap, floored at min_gap.
                const double draw = -1.5 * static_cast<double>(min_gap) * std::log(rng.uniform_open());
                gap = std::max<Slot>(min_gap, static_cast<Slot>(std::llround(draw)));
            }
            at += gap;
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Arrival& a, const Arrival& b) { return std::tie(a.slot, a.task) < std::tie(b.slot, b.task); });
    return out;
}

}  // namespace slotshift
