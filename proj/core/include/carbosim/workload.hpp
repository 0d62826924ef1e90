#pragma once

#include <string>
#include <vector>

namespace carbosim {

/// A FLOP-counted unit of work. The FLOPs divide evenly across the
/// requested cores, which are allocated exclusively for the whole run.
struct Job {
    std::string id;
    double submit_time = 0.0;  // seconds
    double flop_total = 0.0;   // FLOP
    int cores_requested = 1;

    bool operator==(const Job&) const = default;
};

struct Workload {
    std::vector<Job> jobs; // sorted by (submit_time, id)

    bool operator==(const Workload&) const = default;
};

/// Parse a JSON array of {id, subtime, cores, flops} objects.
/// Jobs come back sorted by submit time (ties by id).
Workload parse_workload(const std::string& document);

/// Wall time of a job on `cores` cores at `speed_per_core` FLOP/s each:
/// flop_total / (cores * speed_per_core). Zero FLOPs take zero seconds.
double job_duration(double flop_total, int cores, double speed_per_core);

} // namespace carbosim
