#pragma once

#include <optional>
#include <string>
#include <vector>

#include "carbosim/energy.hpp"
#include "carbosim/platform.hpp"

namespace carbosim {

struct CiPoint {
    double time_s = 0.0;
    double g_per_kwh = 0.0;

    bool operator==(const CiPoint&) const = default;
};

/// Carbon intensity over time: a single constant value, or a step
/// function that holds each point's value until the next breakpoint
/// (hold-backward before the first point, hold-forward after the last).
struct CarbonIntensitySeries {
    enum class Kind { Constant, Step };

    Kind kind = Kind::Constant;
    double constant_g_per_kwh = 0.0;
    std::vector<CiPoint> points; // Kind::Step: non-empty, strictly increasing times

    static CarbonIntensitySeries constant(double g_per_kwh);
    static CarbonIntensitySeries step(std::vector<CiPoint> points);

    bool operator==(const CarbonIntensitySeries&) const = default;
};

/// Parse a CI trace CSV: `time_s,ci_g_per_kwh` rows, optional header,
/// `#` comment lines skipped. Times must be strictly increasing and
/// values non-negative.
CarbonIntensitySeries parse_ci_series(const std::string& document);

/// Carbon intensity in force at time t.
double ci_at(const CarbonIntensitySeries& series, double t);

/// First breakpoint strictly after t, if any. Constant series have none.
std::optional<double> next_ci_change_after(const CarbonIntensitySeries& series, double t);

/// Grams of CO2 for an energy step priced at one carbon intensity:
/// (energy_j / 3.6e6) * ci.
double carbon_step(double energy_j, double ci_g_per_kwh);

/// Live per-host state: power mode, occupancy and the energy/carbon
/// accounts advanced by settlements.
struct HostRuntime {
    HostSpec spec;
    HostMode mode = HostMode::On;
    int busy_cores = 0;
    double last_update = 0.0; // t0 of the next settlement interval
    double energy_j = 0.0;
    double carbon_g = 0.0;
    double last_step_g = 0.0; // carbon of the most recent settlement step
    CarbonIntensitySeries ci; // resolved series (trace refs already loaded)
};

/// Current carbon intensity of the host (sampled at last_update).
double host_current_ci(const HostRuntime& host);

/// Settle the single interval [host.last_update, t1]: energy accrues at the
/// power of the state held at last_update, carbon prices that energy at the
/// carbon intensity in force at last_update. The whole interval is priced
/// at the t0 intensity even if the series changes inside it; callers that
/// need exact step pricing must split at breakpoints (see settle_host).
///
/// Throws ClockRegression when t1 < host.last_update.
void update_host_footprint(HostRuntime& host, double t1, bool carbon_enabled = true);

/// Settle host up to t1 with a forced intermediate settlement at every CI
/// breakpoint strictly inside (last_update, t1), so no interval straddles
/// a carbon intensity change. This is the settlement the engine uses.
void settle_host(HostRuntime& host, double t1, bool carbon_enabled = true);

/// Settle host at t, then replace its CI source with a constant value
/// holding from t onward. Throws Error on a negative value.
void set_carbon_intensity(HostRuntime& host, double g_per_kwh, double t,
                          bool carbon_enabled = true);

} // namespace carbosim
