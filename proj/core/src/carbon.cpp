#include "carbosim/carbon.hpp"

#include <algorithm>
#include <cmath>

#include "carbosim/error.hpp"
#include "text_util.hpp"

namespace carbosim {

// Eq. joules -> kWh divisor.
constexpr double kJoulesPerKwh = 3.6e6;

CarbonIntensitySeries CarbonIntensitySeries::constant(double g_per_kwh) {
    if (g_per_kwh < 0.0 || !std::isfinite(g_per_kwh))
        throw Error("carbon intensity must be finite and >= 0");
    CarbonIntensitySeries s;
    s.kind = Kind::Constant;
    s.constant_g_per_kwh = g_per_kwh;
    return s;
}

CarbonIntensitySeries CarbonIntensitySeries::step(std::vector<CiPoint> points) {
    if (points.empty())
        throw Error("step carbon intensity series must have at least one point");
    for (size_t i = 0; i < points.size(); ++i) {
        if (points[i].g_per_kwh < 0.0 || !std::isfinite(points[i].g_per_kwh))
            throw Error("carbon intensity values must be finite and >= 0");
        if (i > 0 && !(points[i].time_s > points[i - 1].time_s))
            throw Error("step carbon intensity times must be strictly increasing");
    }
    CarbonIntensitySeries s;
    s.kind = Kind::Step;
    s.points = std::move(points);
    return s;
}

CarbonIntensitySeries parse_ci_series(const std::string& document) {
    std::vector<CiPoint> points;
    size_t row = 0;
    for (const std::string& line : detail::data_lines(document)) {
        ++row;
        auto fields = detail::split_csv_line(line);
        if (row == 1 && !fields.empty() && detail::trim(fields[0]) == "time_s")
            continue; // header
        if (fields.size() != 2)
            throw ParseError("ci trace row " + std::to_string(row) +
                             ": expected time_s,ci_g_per_kwh");
        CiPoint p;
        p.time_s = detail::parse_double(fields[0], "ci trace row " + std::to_string(row) + " time");
        p.g_per_kwh =
            detail::parse_double(fields[1], "ci trace row " + std::to_string(row) + " value");
        if (p.g_per_kwh < 0.0)
            throw ParseError("ci trace row " + std::to_string(row) + ": negative intensity");
        if (!points.empty() && !(p.time_s > points.back().time_s))
            throw ParseError("ci trace row " + std::to_string(row) +
                             ": times must be strictly increasing");
        points.push_back(p);
    }
    if (points.empty())
        throw ParseError("ci trace: no data rows");
    return CarbonIntensitySeries::step(std::move(points));
}

double ci_at(const CarbonIntensitySeries& series, double t) {
    if (series.kind == CarbonIntensitySeries::Kind::Constant)
        return series.constant_g_per_kwh;

    // Latest point at or before t; hold-backward before the first point.
    auto it = std::upper_bound(series.points.begin(), series.points.end(), t,
                               [](double value, const CiPoint& p) { return value < p.time_s; });
    if (it == series.points.begin())
        return series.points.front().g_per_kwh;
    return std::prev(it)->g_per_kwh;
}

std::optional<double> next_ci_change_after(const CarbonIntensitySeries& series, double t) {
    if (series.kind == CarbonIntensitySeries::Kind::Constant)
        return std::nullopt;
    auto it = std::upper_bound(series.points.begin(), series.points.end(), t,
                               [](double value, const CiPoint& p) { return value < p.time_s; });
    if (it == series.points.end())
        return std::nullopt;
    return it->time_s;
}

double carbon_step(double energy_j, double ci_g_per_kwh) {
    return energy_j / kJoulesPerKwh * ci_g_per_kwh;
}

double host_current_ci(const HostRuntime& host) {
    return ci_at(host.ci, host.last_update);
}

void update_host_footprint(HostRuntime& host, double t1, bool carbon_enabled) {
    if (t1 < host.last_update)
        throw ClockRegression("update_host_footprint: t1 " + std::to_string(t1) +
                              " precedes last update " + std::to_string(host.last_update));

    double power = instantaneous_power(host.spec.profile, host.mode, host.busy_cores,
                                       host.spec.core_count);
    double energy_step = accumulate_energy(power, host.last_update, t1);
    double carbon = carbon_enabled ? carbon_step(energy_step, host_current_ci(host)) : 0.0;

    host.energy_j += energy_step;
    host.carbon_g += carbon;
    host.last_step_g = carbon;
    host.last_update = t1;
}

void settle_host(HostRuntime& host, double t1, bool carbon_enabled) {
    if (t1 < host.last_update)
        throw ClockRegression("settle_host: t1 " + std::to_string(t1) +
                              " precedes last update " + std::to_string(host.last_update));

    // Force a settlement at every CI breakpoint so the t0-priced interval
    // never straddles an intensity change.
    while (auto change = next_ci_change_after(host.ci, host.last_update)) {
        if (!(*change < t1))
            break;
        update_host_footprint(host, *change, carbon_enabled);
    }
    update_host_footprint(host, t1, carbon_enabled);
}

void set_carbon_intensity(HostRuntime& host, double g_per_kwh, double t, bool carbon_enabled) {
    if (g_per_kwh < 0.0 || !std::isfinite(g_per_kwh))
        throw Error("set_carbon_intensity: value must be finite and >= 0");
    settle_host(host, t, carbon_enabled);
    host.ci = CarbonIntensitySeries::constant(g_per_kwh);
}

} // namespace carbosim
