#include "slotshift/dispatch.hpp"

namespace slotshift {

Dispatcher::Dispatcher(int tt_cores, DispatchOptions opts) : opts_(opts) {
    states_.resize(tt_cores);
    for (int c = 0; c < tt_cores; ++c) states_[c].core = c;
}

TickOutcome Dispatcher::tick(int core, int next_task) {
    CoreDispatchState& st = states_[core];
    if (next_task == st.current_task) return TickOutcome::NoChange;
    const bool countable = opts_.count_idle_be_switches || (next_task != kIdle && st.current_task != kIdle);
    TickOutcome outcome = TickOutcome::NoChange;
    if (countable) {
        ++st.switches;
        outcome = TickOutcome::Switch;
    }
    if (next_task != kIdle) {
        auto it = last_core_of_.find(next_task);
        if (it != last_core_of_.end() && it->second != core) {
            ++st.migrations;
            if (outcome != TickOutcome::NoChange) outcome = TickOutcome::SwitchAndMigration;
        }
        last_core_of_[next_task] = core;
    }
    st.current_task = next_task;
    return outcome;
}

void Dispatcher::execute_slot(Engine& engine, TraceWriter* trace) {
    const Slot slot = engine.current_slot();
    const auto& upcoming = engine.upcoming();
    for (int core = 0; core < engine.tt_cores(); ++core) {
        const DispatchDecision& dec = upcoming[core];
        const TickOutcome outcome = tick(core, dec.task);
        if (trace) {
            TraceEvent ev{slot, core, EventKind::Dispatch, dec.task, dec.job, {}};
            if (dec.best_effort) ev.detail["be"] = true;
            trace->record(std::move(ev));
            if (outcome != TickOutcome::NoChange)
                trace->record({slot, core, EventKind::Switch, dec.task, dec.job, {}});
            if (outcome == TickOutcome::SwitchAndMigration)
                trace->record({slot, core, EventKind::Migration, dec.task, dec.job, {}});
        }
        if (dec.task == kIdle)
            ++states_[core].idle_slots;
        else if (dec.best_effort)
            ++states_[core].be_slots;
        else
            engine.note_execution(core);
    }
    engine.end_of_slot();
}

}  // namespace slotshift
