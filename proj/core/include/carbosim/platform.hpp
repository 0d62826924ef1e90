#pragma once

#include <string>
#include <vector>

namespace carbosim {

/// Per-host power draw (watts) at the three usage levels plus the
/// powered-off residual. Valid profiles satisfy idle <= epsilon <= allcores.
struct PowerProfile {
    double idle_w = 0.0;     ///< Powered on, no core busy.
    double epsilon_w = 0.0;  ///< Exactly one core busy.
    double allcores_w = 0.0; ///< Every core busy.
    double off_w = 0.0;      ///< Powered off (residual draw).

    bool operator==(const PowerProfile&) const = default;
};

/// Where a host gets its carbon intensity from: either a constant
/// value in g/kWh or a named trace file resolved by the caller.
struct CiSourceRef {
    enum class Kind { Constant, Trace };

    Kind kind = Kind::Constant;
    double constant_g_per_kwh = 0.0;
    std::string trace_name; // set when kind == Trace

    static CiSourceRef constant(double g_per_kwh);
    static CiSourceRef trace(std::string name);

    bool operator==(const CiSourceRef&) const = default;
};

struct HostSpec {
    std::string id;
    int core_count = 1;
    double speed_per_core = 0.0; // FLOP/s
    PowerProfile profile;
    CiSourceRef ci_source;

    bool operator==(const HostSpec&) const = default;
};

struct PlatformSpec {
    std::vector<HostSpec> hosts; // document order

    bool operator==(const PlatformSpec&) const = default;
};

/// One invariant violation found by validate_platform().
struct PlatformViolation {
    std::string host_id; // empty for platform-level violations
    std::string field;
    std::string message;
};

/// Parse "A:B:C" wattages plus the off wattage.
/// Throws ParseError on malformed input and OrderingViolation when
/// idle > epsilon or epsilon > allcores.
PowerProfile parse_power_profile(const std::string& text, const std::string& off_text);

/// Parse a platform document (XML, host/prop subset).
///
/// Recognized structure: `host` elements with `id`, `speed` and `core`
/// attributes and `prop` children named `wattage_per_state`, `wattage_off`,
/// `carbon_intensity` or `carbon_intensity_trace`. `platform` and `zone`
/// pass as structural wrappers; any other element or prop is skipped, with
/// one note per distinct name appended to *warnings. A `speed` value may
/// carry an f/Kf/Mf/Gf/Tf suffix; "12Gf" means 12e9 FLOP/s per core.
///
/// A host missing both carbon props defaults to a constant 0 g/kWh (with a
/// warning); declaring both is an error. A missing `wattage_off` defaults
/// to 0 W with a warning.
PlatformSpec parse_platform(const std::string& document,
                            std::vector<std::string>* warnings = nullptr);

/// Render a PlatformSpec back to the platform XML subset.
/// parse_platform(serialize_platform(spec)) reproduces spec field by field.
std::string serialize_platform(const PlatformSpec& spec);

/// Check every PlatformSpec/HostSpec/PowerProfile invariant.
/// Violations are data, not failures: an empty result means valid.
std::vector<PlatformViolation> validate_platform(const PlatformSpec& spec);

} // namespace carbosim
