#include "carbosim/events.hpp"

#include <algorithm>
#include <sstream>

#include "carbosim/error.hpp"
#include "text_util.hpp"

namespace carbosim {

namespace {

const char* action_name(EventAction action) {
    switch (action) {
    case EventAction::PowerOn: return "power_on";
    case EventAction::PowerOff: return "power_off";
    case EventAction::SetCi: return "set_ci";
    }
    return "?";
}

} // namespace

std::vector<ExternalEvent> parse_events(const std::string& document) {
    std::vector<ExternalEvent> events;
    size_t row = 0;
    for (const std::string& line : detail::data_lines(document)) {
        ++row;
        auto fields = detail::split_csv_line(line);
        if (row == 1 && !fields.empty() && detail::trim(fields[0]) == "time")
            continue; // header
        const std::string context = "events row " + std::to_string(row);
        if (fields.size() != 3 && fields.size() != 4)
            throw ParseError(context + ": expected time,host_id,action[,value]");

        ExternalEvent ev;
        ev.time = detail::parse_double(fields[0], context + " time");
        if (ev.time < 0.0)
            throw ParseError(context + ": negative time");
        ev.host_id = detail::trim(fields[1]);
        if (ev.host_id.empty())
            throw ParseError(context + ": empty host_id");

        std::string action = detail::trim(fields[2]);
        if (action == "power_on") {
            ev.action = EventAction::PowerOn;
        } else if (action == "power_off") {
            ev.action = EventAction::PowerOff;
        } else if (action == "set_ci") {
            ev.action = EventAction::SetCi;
        } else {
            throw UnknownAction(context + ": unknown action '" + action + "'");
        }

        if (ev.action == EventAction::SetCi) {
            if (fields.size() != 4)
                throw ParseError(context + ": set_ci requires a value");
            ev.ci_value = detail::parse_double(fields[3], context + " value");
            if (ev.ci_value < 0.0)
                throw ParseError(context + ": set_ci value must be >= 0");
        } else if (fields.size() == 4 && !detail::trim(fields[3]).empty()) {
            throw ParseError(context + ": unexpected value for action '" + action + "'");
        }

        events.push_back(std::move(ev));
    }

    // Equal times keep file order; the engine relies on this for ties.
    std::stable_sort(events.begin(), events.end(),
                     [](const ExternalEvent& a, const ExternalEvent& b) { return a.time < b.time; });
    return events;
}

std::string serialize_events(const std::vector<ExternalEvent>& events) {
    std::ostringstream out;
    out << "time,host_id,action,value\n";
    for (const ExternalEvent& ev : events) {
        out << detail::exact_number(ev.time) << "," << ev.host_id << ","
            << action_name(ev.action);
        if (ev.action == EventAction::SetCi)
            out << "," << detail::exact_number(ev.ci_value);
        out << "\n";
    }
    return out.str();
}

} // namespace carbosim
