#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "slotshift/model.hpp"

namespace slotshift {

enum class EventKind {
    CycleWrap,
    Admit,
    Reject,
    Dispatch,
    Switch,
    Migration,
    Complete,
    Overrun,
    ScChange,
};

const char* to_string(EventKind kind);

/// One timestamped record; the unit of all metrics and replay.
struct TraceEvent {
    Slot slot = 0;
    int core = -1;  // -1: not tied to one core
    EventKind kind = EventKind::Dispatch;
    int task = kIdle;
    int job = -1;
    nlohmann::ordered_json detail;  // small scalars only
};

/// Append-only event buffer with JSONL export. Byte-stable for a fixed seed.
class TraceWriter {
public:
    void record(TraceEvent ev) { events_.push_back(std::move(ev)); }
    const std::vector<TraceEvent>& events() const { return events_; }

    /// Header line first ("v":1), then one event per line.
    void flush(std::ostream& os, const nlohmann::ordered_json& header_extra = {}) const;
    void flush_to_file(const std::string& path, const nlohmann::ordered_json& header_extra = {}) const;

private:
    std::vector<TraceEvent> events_;
};

struct MetricsReport {
    std::int64_t slots_simulated = 0;
    std::int64_t admit_attempts = 0;
    std::int64_t admitted = 0;
    std::int64_t rejected = 0;
    double acceptance_ratio = 0.0;
    std::int64_t deadline_misses = 0;
    std::int64_t switches = 0;
    std::int64_t migrations = 0;
    std::int64_t overruns = 0;
    std::int64_t idle_slots = 0;
    std::int64_t be_slots = 0;
    std::int64_t dispatch_slots = 0;  // core-slots running RT work
    double idle_share = 0.0;
    double be_share = 0.0;

    nlohmann::ordered_json to_json() const;
    std::string to_csv() const;  // single header + single data row
};

/// Single pass over in-memory events.
MetricsReport compute_metrics(const std::vector<TraceEvent>& events);

/// Parse a JSONL trace stream back into events. Throws std::runtime_error
/// with the line number on malformed input. The header line is validated
/// and skipped.
std::vector<TraceEvent> read_trace(std::istream& is);

/// CSV rows (core, start_slot, end_slot, task) of maximal dispatch runs,
/// for external Gantt plotting.
std::string timeline_csv(const std::vector<TraceEvent>& events);

}  // namespace slotshift
