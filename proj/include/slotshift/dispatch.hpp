#pragma once

#include <map>
#include <vector>

#include "slotshift/engine.hpp"
#include "slotshift/model.hpp"

namespace slotshift {

enum class TickOutcome { NoChange, Switch, SwitchAndMigration };

struct CoreDispatchState {
    int core = 0;
    int current_task = kIdle;
    std::int64_t switches = 0;
    std::int64_t migrations = 0;
    std::int64_t idle_slots = 0;
    std::int64_t be_slots = 0;
};

struct DispatchOptions {
    /// IDLE<->BE transitions are dispatch changes and count as switches;
    /// turn off for comparison studies.
    bool count_idle_be_switches = true;
};

/// Per-core TT dispatcher tick simulation: detects task changes, counts
/// context switches and cross-core migrations, applies execution outcomes
/// back to the engine.
class Dispatcher {
public:
    Dispatcher(int tt_cores, DispatchOptions opts = {});

    /// One core, one slot. Counters move only when the dispatched id
    /// differs from the previous slot's id on this core.
    TickOutcome tick(int core, int next_task);

    /// Advance all cores for the slot the engine just planned: tick each
    /// core, emit dispatch/switch/migration events, feed execution back.
    void execute_slot(Engine& engine, TraceWriter* trace);

    const CoreDispatchState& core_state(int core) const { return states_[core]; }

private:
    DispatchOptions opts_;
    std::vector<CoreDispatchState> states_;
    std::map<int, int> last_core_of_;
};

}  // namespace slotshift
