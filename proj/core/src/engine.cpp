#include "carbosim/engine.hpp"

#include <algorithm>
#include <deque>
#include <queue>

#include "carbosim/error.hpp"

namespace carbosim {

namespace {

// Queue entry classes, in tie-break order at equal timestamps. A job end
// at t frees its cores before a job starting at t asks for them, and a CI
// change at t prices the interval that starts at t.
enum class EvClass : int { External = 0, JobEnd = 1, JobSubmit = 2 };

struct QueuedEvent {
    double time;
    EvClass cls;
    size_t ext_index; // file order among external events
    std::string id;   // host id for External, job id otherwise

    bool operator>(const QueuedEvent& other) const {
        if (time != other.time)
            return time > other.time;
        if (cls != other.cls)
            return static_cast<int>(cls) > static_cast<int>(other.cls);
        if (id != other.id)
            return id > other.id;
        return ext_index > other.ext_index; // same host, same time: file order
    }
};

} // namespace

Engine::Engine(const PlatformSpec& platform, SimulationOptions options)
    : options_(std::move(options)) {
    auto violations = validate_platform(platform);
    if (!violations.empty()) {
        std::string msg = "invalid platform:";
        for (const auto& v : violations)
            msg += " [" + v.host_id + "." + v.field + ": " + v.message + "]";
        throw Error(msg);
    }

    hosts_.reserve(platform.hosts.size());
    for (const HostSpec& spec : platform.hosts) {
        HostRuntime host;
        host.spec = spec;
        host.mode = HostMode::On; // hosts are created On and idle at t = 0
        if (spec.ci_source.kind == CiSourceRef::Kind::Constant) {
            host.ci = CarbonIntensitySeries::constant(spec.ci_source.constant_g_per_kwh);
        } else {
            auto it = options_.ci_traces.find(spec.ci_source.trace_name);
            if (it == options_.ci_traces.end())
                throw Error("host '" + spec.id + "': carbon intensity trace '" +
                            spec.ci_source.trace_name + "' not provided");
            host.ci = it->second;
        }
        hosts_.push_back(std::move(host));
    }
}

CarbonSubscription Engine::register_carbon_plugin() {
    if (started_)
        throw Error("carbon plugin must be registered before the engine runs");
    if (carbon_registered_)
        throw Error("carbon plugin already registered");
    carbon_registered_ = true;
    return CarbonSubscription{true};
}

HostRuntime* Engine::find_host(const std::string& id) {
    for (HostRuntime& host : hosts_)
        if (host.spec.id == id)
            return &host;
    return nullptr;
}

void Engine::settle_all(double t) {
    for (HostRuntime& host : hosts_)
        settle_host(host, t, carbon_registered_);
}

void Engine::emit_record(double t, char type) {
    double energy = 0.0;
    double carbon = 0.0;
    for (const HostRuntime& host : hosts_) {
        energy += host.energy_j;
        carbon += host.carbon_g;
    }
    const TraceRecord* prev = trace_.empty() ? nullptr : &trace_.back();
    trace_.push_back(record_event(t, energy, carbon, type, prev));
}

SimulationResult Engine::run(const Workload& workload, const std::vector<ExternalEvent>& events) {
    if (started_)
        throw Error("engine already ran; create a new one per simulation");
    started_ = true;

    SimulationResult result;

    std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, std::greater<QueuedEvent>> queue;
    std::map<std::string, const Job*> jobs_by_id;
    for (const Job& job : workload.jobs) {
        if (!jobs_by_id.emplace(job.id, &job).second)
            throw Error("workload has duplicate job id '" + job.id + "'");
        queue.push({job.submit_time, EvClass::JobSubmit, 0, job.id});
    }
    for (size_t i = 0; i < events.size(); ++i) {
        if (events[i].time < 0.0)
            throw Error("external event time must be >= 0");
        queue.push({events[i].time, EvClass::External, i, events[i].host_id});
    }

    int max_cores = 0;
    for (const HostRuntime& host : hosts_)
        max_cores = std::max(max_cores, host.spec.core_count);

    // FCFS queue: jobs wait here in (submit_time, id) order; the head
    // blocks everything behind it until it can start.
    std::deque<const Job*> pending;
    std::map<std::string, int> running_cores; // job id -> host index
    double makespan = 0.0;
    double clock = 0.0; // last processed event time

    auto try_start_pending = [&](double now) {
        while (!pending.empty()) {
            const Job* job = pending.front();
            HostRuntime* target = nullptr;
            size_t target_index = 0;
            for (size_t h = 0; h < hosts_.size(); ++h) {
                HostRuntime& host = hosts_[h];
                if (host.mode == HostMode::On &&
                    host.spec.core_count - host.busy_cores >= job->cores_requested) {
                    target = &host;
                    target_index = h;
                    break;
                }
            }
            if (target == nullptr)
                break; // head waits; strict submit-order start

            target->busy_cores += job->cores_requested;
            running_cores[job->id] = static_cast<int>(target_index);
            double end =
                now + job_duration(job->flop_total, job->cores_requested, target->spec.speed_per_core);
            queue.push({end, EvClass::JobEnd, 0, job->id});
            emit_record(now, 's');
            pending.pop_front();
        }
    };

    while (!queue.empty()) {
        const double now = queue.top().time;
        clock = now;

        // Settle every host before any state at `now` changes; zero-width
        // re-settlements are no-ops, so this is safe at repeated times.
        settle_all(now);

        std::vector<const Job*> submitted;
        while (!queue.empty() && queue.top().time == now) {
            QueuedEvent ev = queue.top();
            queue.pop();

            switch (ev.cls) {
            case EvClass::External: {
                const ExternalEvent& ext = events[ev.ext_index];
                HostRuntime* host = find_host(ext.host_id);
                if (host == nullptr)
                    throw Error("external event targets unknown host '" + ext.host_id + "'");
                switch (ext.action) {
                case EventAction::PowerOn:
                    if (host->mode == HostMode::On) {
                        warnings_.push_back("t=" + std::to_string(now) + ": power_on of host '" +
                                            ext.host_id + "' already On, ignored");
                    } else {
                        host->mode = HostMode::On;
                        emit_record(now, 'p');
                    }
                    break;
                case EventAction::PowerOff:
                    if (host->mode == HostMode::Off) {
                        warnings_.push_back("t=" + std::to_string(now) + ": power_off of host '" +
                                            ext.host_id + "' already Off, ignored");
                    } else if (host->busy_cores > 0) {
                        throw PreemptionUnsupported(
                            "power_off of host '" + ext.host_id + "' at t=" + std::to_string(now) +
                            " while " + std::to_string(host->busy_cores) + " cores are busy");
                    } else {
                        host->mode = HostMode::Off;
                        emit_record(now, 'p');
                    }
                    break;
                case EventAction::SetCi:
                    // Host already settled at `now`; this only swaps the series.
                    set_carbon_intensity(*host, ext.ci_value, now, carbon_registered_);
                    break;
                }
                break;
            }
            case EvClass::JobEnd: {
                auto it = running_cores.find(ev.id);
                HostRuntime& host = hosts_[static_cast<size_t>(it->second)];
                host.busy_cores -= jobs_by_id[ev.id]->cores_requested;
                running_cores.erase(it);
                makespan = std::max(makespan, now);
                emit_record(now, 'e');
                break;
            }
            case EvClass::JobSubmit:
                submitted.push_back(jobs_by_id[ev.id]);
                break;
            }
        }

        for (const Job* job : submitted) {
            if (job->cores_requested > max_cores) {
                result.rejected_jobs.push_back(
                    {job->id, "requests " + std::to_string(job->cores_requested) +
                                  " cores, more than any host has"});
                warnings_.push_back("job '" + job->id + "' rejected: no host is large enough");
                continue;
            }
            pending.push_back(job);
        }
        try_start_pending(now);
    }

    for (const Job* job : pending) {
        result.rejected_jobs.push_back({job->id, "never started: no eligible host became available"});
        warnings_.push_back("job '" + job->id + "' never started: all capable hosts stayed "
                            "unavailable until the simulation ended");
    }

    // The run closes at the last processed event time (or the requested
    // horizon when that is later), with a final settlement of every host.
    const double final_time = std::max({clock, options_.end_time, 0.0});
    settle_all(final_time);

    result.makespan = makespan;
    result.trace = std::move(trace_);
    result.warnings = std::move(warnings_);
    result.per_host_summary.reserve(hosts_.size());
    for (const HostRuntime& host : hosts_)
        result.per_host_summary.push_back({host.spec.id, host.energy_j, host.carbon_g});
    return result;
}

SimulationResult run_simulation(const PlatformSpec& platform, const Workload& workload,
                                const std::vector<ExternalEvent>& events,
                                const SimulationOptions& options) {
    Engine engine(platform, options);
    if (options.carbon_enabled)
        engine.register_carbon_plugin();
    return engine.run(workload, events);
}

} // namespace carbosim
