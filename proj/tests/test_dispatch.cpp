#include <doctest.h>

#include "helpers.hpp"
#include "slotshift/dispatch.hpp"
#include "slotshift/sim.hpp"

using namespace slotshift;
using namespace testutil;

TEST_CASE("tick counts switches only on task change") {
    Dispatcher d(1);
    CHECK(d.tick(0, 5) == TickOutcome::Switch);  // from initial idle
    CHECK(d.tick(0, 5) == TickOutcome::NoChange);
    CHECK(d.tick(0, 7) == TickOutcome::Switch);
    CHECK(d.tick(0, kIdle) == TickOutcome::Switch);
    CHECK(d.tick(0, kIdle) == TickOutcome::NoChange);
    CHECK(d.core_state(0).switches == 3);
}

TEST_CASE("a task reappearing on another core is a migration") {
    Dispatcher d(2);
    CHECK(d.tick(0, 5) == TickOutcome::Switch);
    CHECK(d.tick(0, kIdle) == TickOutcome::Switch);
    CHECK(d.tick(1, 5) == TickOutcome::SwitchAndMigration);
    CHECK(d.core_state(1).migrations == 1);
}

TEST_CASE("full reference run produces one dispatch event per slot") {
    Engine e(make_s1());
    TraceWriter trace;
    Dispatcher d(1);
    for (int s = 0; s < 6; ++s) {
        e.run_slot_boundary(s == 0 ? std::vector<Engine::ApRequest>{{kJ, 0}}
                                   : std::vector<Engine::ApRequest>{});
        d.execute_slot(e, &trace);
    }
    int dispatches = 0;
    std::vector<int> seq;
    for (const auto& ev : trace.events())
        if (ev.kind == EventKind::Dispatch && ev.core == 0) {
            ++dispatches;
            seq.push_back(ev.task);
        }
    CHECK(dispatches == 6);
    CHECK(seq == std::vector<int>({kA, kA, kJ, kB, kB, kJ}));
    // A->J, J->B, B->J transitions plus the initial idle->A switch
    CHECK(d.core_state(0).switches == 4);
}

TEST_CASE("simulation end to end is deterministic and miss free") {
    const auto inst = make_small_instance(7);
    SimOptions opts;
    opts.seed = 99;
    const auto a = simulate(inst.table, opts);
    const auto b = simulate(inst.table, opts);
    CHECK(a.metrics.deadline_misses == 0);
    CHECK(a.metrics.slots_simulated == b.metrics.slots_simulated);
    REQUIRE(a.trace.events().size() == b.trace.events().size());
    CHECK(a.arrivals.size() == b.arrivals.size());
    CHECK(a.arrival_admitted == b.arrival_admitted);
}
