#include "carbosim/trace.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "carbosim/error.hpp"

namespace carbosim {

TraceRecord record_event(double time, double platform_energy_j, double platform_carbon_g,
                         char event_type, const TraceRecord* prev) {
    TraceRecord rec;
    rec.time = time;
    rec.energy_j = platform_energy_j;
    rec.carbon_g = platform_carbon_g;
    rec.event_type = event_type;
    if (prev != nullptr && time > prev->time)
        rec.ecarbon_g_per_s = (platform_carbon_g - prev->carbon_g) / (time - prev->time);
    return rec;
}

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    std::string s = buf;
    if (s.find('.') != std::string::npos) {
        size_t last = s.find_last_not_of('0');
        if (s[last] == '.')
            --last;
        s.erase(last + 1);
    }
    if (s == "-0")
        s = "0";
    return s;
}

std::string render_trace(const std::vector<TraceRecord>& records) {
    std::ostringstream out;
    out << "time,energy,carbon_emission,event_type,ecarbon\n";
    for (const TraceRecord& rec : records) {
        out << format_number(rec.time) << "," << format_number(rec.energy_j) << ","
            << format_number(rec.carbon_g) << "," << rec.event_type << ","
            << format_number(rec.ecarbon_g_per_s) << "\n";
    }
    return out.str();
}

std::string render_summary(const std::vector<HostSummary>& hosts) {
    std::ostringstream out;
    out << "host_id,total_energy_j,total_carbon_g\n";
    for (const HostSummary& host : hosts) {
        out << host.host_id << "," << format_number(host.energy_j) << ","
            << format_number(host.carbon_g) << "\n";
    }
    return out.str();
}

// Content lands in a temporary sibling first so a failed run never leaves
// a truncated output behind.
void write_text_atomically(const std::string& content, const std::string& path) {
    namespace fs = std::filesystem;
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open '" + tmp + "' for writing");
        out << content;
        out.flush();
        if (!out)
            throw IoError("write to '" + tmp + "' failed");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move '" + tmp + "' to '" + path + "'");
    }
}

void write_trace(const std::vector<TraceRecord>& records, const std::string& path) {
    write_text_atomically(render_trace(records), path);
}

void write_summary(const std::vector<HostSummary>& hosts, const std::string& path) {
    write_text_atomically(render_summary(hosts), path);
}

} // namespace carbosim
