#pragma once

#include <string>
#include <vector>

namespace carbosim {

enum class EventAction { PowerOn, PowerOff, SetCi };

/// Host state change injected from outside the workload: power
/// transitions and carbon intensity updates.
struct ExternalEvent {
    double time = 0.0;
    std::string host_id;
    EventAction action = EventAction::PowerOn;
    double ci_value = 0.0; // meaningful for SetCi only

    bool operator==(const ExternalEvent&) const = default;
};

/// Parse CSV lines `time,host_id,action[,value]`. The header line is
/// optional; `#` comment lines are skipped. Actions: power_on, power_off,
/// set_ci (set_ci requires the value column, the others reject it).
/// Events come back sorted by time, equal times keeping file order.
std::vector<ExternalEvent> parse_events(const std::string& document);

/// Render events back to the CSV format accepted by parse_events.
std::string serialize_events(const std::vector<ExternalEvent>& events);

} // namespace carbosim
