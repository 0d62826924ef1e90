#pragma once

#include <string>
#include <vector>

#include "carbosim/platform.hpp"

namespace carbosim {

struct HostRuntime;

enum class HostMode { Off, On };

struct PowerSample {
    std::string host_id;
    double time_s = 0.0;
    double power_w = 0.0;
};

/// Power drawn by a host given its profile, mode and occupancy.
///
/// Off hosts draw off_w regardless of occupancy bookkeeping. An On host
/// draws idle_w with no busy core; with c >= 1 busy cores out of n the draw
/// interpolates linearly between epsilon_w (one core) and allcores_w (all
/// cores): epsilon_w + (allcores_w - epsilon_w) * (c - 1) / (n - 1).
/// A single-core host with its core busy draws allcores_w.
///
/// Throws Error when busy_cores is outside [0, core_count].
double instantaneous_power(const PowerProfile& profile, HostMode mode,
                           int busy_cores, int core_count);

/// Energy of one settlement interval: power_w * (t1 - t0) joules.
/// Throws ClockRegression when t1 < t0.
double accumulate_energy(double power_w, double t0, double t1);

/// Sum of the settled energy accounts, in platform order.
double platform_energy(const std::vector<HostRuntime>& hosts);

/// Power the host draws in its current state, stamped with last_update.
PowerSample power_sample(const HostRuntime& host);

} // namespace carbosim
