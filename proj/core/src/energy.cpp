#include "carbosim/energy.hpp"

#include "carbosim/carbon.hpp"
#include "carbosim/error.hpp"

namespace carbosim {

double instantaneous_power(const PowerProfile& profile, HostMode mode, int busy_cores,
                           int core_count) {
    if (busy_cores < 0 || busy_cores > core_count)
        throw Error("busy_cores " + std::to_string(busy_cores) + " out of range [0, " +
                    std::to_string(core_count) + "]");

    if (mode == HostMode::Off)
        return profile.off_w;
    if (busy_cores == 0)
        return profile.idle_w;
    if (core_count == 1)
        return profile.allcores_w;

    double share = static_cast<double>(busy_cores - 1) / static_cast<double>(core_count - 1);
    return profile.epsilon_w + (profile.allcores_w - profile.epsilon_w) * share;
}

double accumulate_energy(double power_w, double t0, double t1) {
    if (t1 < t0)
        throw ClockRegression("accumulate_energy: t1 " + std::to_string(t1) + " precedes t0 " +
                              std::to_string(t0));
    return power_w * (t1 - t0);
}

double platform_energy(const std::vector<HostRuntime>& hosts) {
    double total = 0.0;
    for (const HostRuntime& host : hosts)
        total += host.energy_j;
    return total;
}

PowerSample power_sample(const HostRuntime& host) {
    return {host.spec.id, host.last_update,
            instantaneous_power(host.spec.profile, host.mode, host.busy_cores,
                                host.spec.core_count)};
}

} // namespace carbosim
