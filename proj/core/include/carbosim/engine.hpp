#pragma once

#include <map>
#include <string>
#include <vector>

#include "carbosim/carbon.hpp"
#include "carbosim/events.hpp"
#include "carbosim/platform.hpp"
#include "carbosim/trace.hpp"
#include "carbosim/workload.hpp"

namespace carbosim {

struct SimulationOptions {
    /// Price energy into carbon during settlements. run_simulation maps
    /// this to registering the carbon plugin on the engine.
    bool carbon_enabled = false;

    /// Keep accounting running at least until this time, even when the
    /// last job or external event is earlier.
    double end_time = 0.0;

    /// Resolved CI traces, keyed by the name used in
    /// carbon_intensity_trace platform props.
    std::map<std::string, CarbonIntensitySeries> ci_traces;
};

struct RejectedJob {
    std::string job_id;
    std::string reason;
};

struct SimulationResult {
    std::vector<TraceRecord> trace;
    std::vector<HostSummary> per_host_summary; // platform order
    double makespan = 0.0;                     // last job completion, 0 if none
    std::vector<RejectedJob> rejected_jobs;
    std::vector<std::string> warnings;
};

/// Token returned by Engine::register_carbon_plugin().
struct CarbonSubscription {
    bool active = false;
};

/// Deterministic discrete-event core.
///
/// Hosts start On and idle at t = 0. Events at equal timestamps apply in a
/// fixed order: external events, then job completions, then job starts,
/// ties by lexicographic id (same-host external events keep file order).
/// Every host event settles the energy and carbon accounts up to the event
/// time before the state change takes effect, and the run ends with a
/// settlement of all hosts at the final event time.
class Engine {
public:
    Engine(const PlatformSpec& platform, SimulationOptions options);

    /// Attach the carbon accounting to every host event notification.
    /// Without it, settlements still accrue energy but carbon_g stays 0.
    /// Throws Error on double registration or once the run has started.
    CarbonSubscription register_carbon_plugin();

    /// Execute the workload and the external events. Single-shot.
    SimulationResult run(const Workload& workload, const std::vector<ExternalEvent>& events);

    const std::vector<HostRuntime>& hosts() const { return hosts_; }

private:
    void settle_all(double t);
    HostRuntime* find_host(const std::string& id);
    void emit_record(double t, char type);

    SimulationOptions options_;
    std::vector<HostRuntime> hosts_;
    std::vector<TraceRecord> trace_;
    std::vector<std::string> warnings_;
    bool carbon_registered_ = false;
    bool started_ = false;
};

/// One-call wrapper: build an engine, register the carbon plugin when
/// options.carbon_enabled is set, and run.
SimulationResult run_simulation(const PlatformSpec& platform, const Workload& workload,
                                const std::vector<ExternalEvent>& events,
                                const SimulationOptions& options = {});

} // namespace carbosim
