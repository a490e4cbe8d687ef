#include "slotshift/trace.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace slotshift {

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::CycleWrap: return "cycle_wrap";
        case EventKind::Admit: return "admit";
        case EventKind::Reject: return "reject";
        case EventKind::Dispatch: return "dispatch";
        case EventKind::Switch: return "switch";
        case EventKind::Migration: return "migration";
        case EventKind::Complete: return "complete";
        case EventKind::Overrun: return "overrun";
        case EventKind::ScChange: return "sc_change";
    }
    return "?";
}

namespace {

EventKind kind_from_string(const std::string& s) {
    static const std::map<std::string, EventKind> table = {
        {"cycle_wrap", EventKind::CycleWrap}, {"admit", EventKind::Admit},
        {"reject", EventKind::Reject},        {"dispatch", EventKind::Dispatch},
        {"switch", EventKind::Switch},        {"migration", EventKind::Migration},
        {"complete", EventKind::Complete},    {"overrun", EventKind::Overrun},
        {"sc_change", EventKind::ScChange},
    };
    auto it = table.find(s);
    if (it == table.end()) throw std::runtime_error("unknown event kind: " + s);
    return it->second;
}

nlohmann::ordered_json event_json(const TraceEvent& ev) {
    nlohmann::ordered_json j;
    j["slot"] = ev.slot;
    j["core"] = ev.core;
    j["kind"] = to_string(ev.kind);
    if (ev.task != kIdle) j["task"] = ev.task;
    if (ev.job >= 0) j["job"] = ev.job;
    if (!ev.detail.empty()) j["detail"] = ev.detail;
    return j;
}

}  // namespace

void TraceWriter::flush(std::ostream& os, const nlohmann::ordered_json& header_extra) const {
    nlohmann::ordered_json header;
    header["v"] = 1;
    for (auto it = header_extra.begin(); it != header_extra.end(); ++it) header[it.key()] = it.value();
    os << header.dump() << '\n';
    for (const auto& ev : events_) os << event_json(ev).dump() << '\n';
}

void TraceWriter::flush_to_file(const std::string& path, const nlohmann::ordered_json& header_extra) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open trace file for writing: " + path);
    flush(os, header_extra);
    if (!os) throw std::runtime_error("write failed: " + path);
}

std::vector<TraceEvent> read_trace(std::istream& is) {
    std::vector<TraceEvent> events;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const std::exception& e) {
            throw std::runtime_error("trace line " + std::to_string(lineno) + ": " + e.what());
        }
        if (!header_seen) {
            if (!j.contains("v") || j["v"] != 1)
                throw std::runtime_error("trace line 1: missing or unsupported header version");
            header_seen = true;
            continue;
        }
        TraceEvent ev;
        try {
            ev.slot = j.at("slot").get<Slot>();
            ev.core = j.at("core").get<int>();
            ev.kind = kind_from_string(j.at("kind").get<std::string>());
            ev.task = j.value("task", kIdle);
            ev.job = j.value("job", -1);
            if (j.contains("detail")) ev.detail = j["detail"];
        } catch (const std::exception& e) {
            throw std::runtime_error("trace line " + std::to_string(lineno) + ": " + e.what());
        }
        events.push_back(std::move(ev));
    }
    return events;
}

MetricsReport compute_metrics(const std::vector<TraceEvent>& events) {
    MetricsReport m;
    Slot max_slot = -1;
    for (const auto& ev : events) {
        max_slot = std::max(max_slot, ev.slot);
        switch (ev.kind) {
            case EventKind::Admit:
                ++m.admit_attempts;
                ++m.admitted;
                break;
            case EventKind::Reject:
                ++m.admit_attempts;
                ++m.rejected;
                break;
            case EventKind::Dispatch:
                if (ev.task == kIdle)
                    ++m.idle_slots;
                else if (ev.detail.is_object() && ev.detail.value("be", false))
                    ++m.be_slots;
                else
                    ++m.dispatch_slots;
                break;
            case EventKind::Switch: ++m.switches; break;
            case EventKind::Migration: ++m.migrations; break;
            case EventKind::Complete:
                // Completion in slot s means the job held the core through
                // the end of s; it met its deadline iff s < abs_deadline.
                if (ev.detail.contains("deadline") && ev.slot >= ev.detail["deadline"].get<Slot>())
                    ++m.deadline_misses;
                break;
            case EventKind::Overrun: ++m.overruns; break;
            default: break;
        }
    }
    m.slots_simulated = max_slot + 1;
    if (m.admit_attempts > 0)
        m.acceptance_ratio = static_cast<double>(m.admitted) / static_cast<double>(m.admit_attempts);
    const double core_slots = static_cast<double>(m.idle_slots + m.be_slots + m.dispatch_slots);
    if (core_slots > 0) {
        m.idle_share = static_cast<double>(m.idle_slots) / core_slots;
        m.be_share = static_cast<double>(m.be_slots) / core_slots;
    }
    return m;
}

nlohmann::ordered_json MetricsReport::to_json() const {
    nlohmann::ordered_json j;
    j["slots_simulated"] = slots_simulated;
    j["admit_attempts"] = admit_attempts;
    j["admitted"] = admitted;
    j["rejected"] = rejected;
    j["acceptance_ratio"] = acceptance_ratio;
    j["deadline_misses"] = deadline_misses;
    j["switches"] = switches;
    j["migrations"] = migrations;
    j["overruns"] = overruns;
    j["idle_slots"] = idle_slots;
    j["be_slots"] = be_slots;
    j["dispatch_slots"] = dispatch_slots;
    j["idle_share"] = idle_share;
    j["be_share"] = be_share;
    return j;
}

std::string MetricsReport::to_csv() const {
    std::ostringstream os;
    os << "slots_simulated,admit_attempts,admitted,rejected,acceptance_ratio,deadline_misses,"
          "switches,migrations,overruns,idle_slots,be_slots,dispatch_slots,idle_share,be_share\n";
    os << slots_simulated << ',' << admit_attempts << ',' << admitted << ',' << rejected << ','
       << acceptance_ratio << ',' << deadline_misses << ',' << switches << ',' << migrations << ','
       << overruns << ',' << idle_slots << ',' << be_slots << ',' << dispatch_slots << ','
       << idle_share << ',' << be_share << '\n';
    return os.str();
}

std::string timeline_csv(const std::vector<TraceEvent>& events) {
    // (core, slot) -> task, then coalesce runs per core.
    std::map<int, std::map<Slot, int>> rows;
    for (const auto& ev : events)
        if (ev.kind == EventKind::Dispatch) rows[ev.core][ev.slot] = ev.task;
    std::ostringstream os;
    os << "core,start_slot,end_slot,task\n";
    for (const auto& [core, row] : rows) {
        auto it = row.begin();
        while (it != row.end()) {
            const Slot start = it->first;
            const int task = it->second;
            Slot end = start + 1;
            auto next = std::next(it);
            while (next != row.end() && next->first == end && next->second == task) {
                ++end;
                ++next;
            }
            os << core << ',' << start << ',' << end << ',' << task << '\n';
            it = next;
        }
    }
    return os.str();
}

}  // namespace slotshift
