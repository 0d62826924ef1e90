#pragma once

#include <string>
#include <vector>

namespace carbosim {

/// One row of the event trace. Energy and carbon are platform-wide
/// cumulative values at the record's time; ecarbon is the platform's
/// average emission rate (g/s) since the previous record.
struct TraceRecord {
    double time = 0.0;
    double energy_j = 0.0;
    double carbon_g = 0.0;
    char event_type = 's'; // 's' job start, 'e' job end, 'p' power state change
    double ecarbon_g_per_s = 0.0;

    bool operator==(const TraceRecord&) const = default;
};

struct HostSummary {
    std::string host_id;
    double energy_j = 0.0;
    double carbon_g = 0.0;
};

/// Build the record for an event at `time`, given the settled platform
/// cumulatives. ecarbon is (carbon - prev.carbon) / (time - prev.time);
/// it is 0 for the first record and for zero-width intervals.
TraceRecord record_event(double time, double platform_energy_j, double platform_carbon_g,
                         char event_type, const TraceRecord* prev);

/// Format a value for the CSV outputs: fixed notation, up to six
/// decimals, trailing zeros (and a bare trailing point) trimmed.
std::string format_number(double value);

/// Render the trace to CSV text: header `time,energy,carbon_emission,
/// event_type,ecarbon`, LF line endings.
std::string render_trace(const std::vector<TraceRecord>& records);

/// Render the per-host summary: `host_id,total_energy_j,total_carbon_g`,
/// one row per host in platform order.
std::string render_summary(const std::vector<HostSummary>& hosts);

/// Write the trace CSV. The file appears atomically: content goes to a
/// temporary sibling first and is renamed into place on success.
void write_trace(const std::vector<TraceRecord>& records, const std::string& path);

/// Write the per-host summary CSV, with the same atomic rename.
void write_summary(const std::vector<HostSummary>& hosts, const std::string& path);

/// Temp-and-rename text write used by every CSV output.
void write_text_atomically(const std::string& content, const std::string& path);

} // namespace carbosim
