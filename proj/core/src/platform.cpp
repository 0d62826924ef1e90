#include "carbosim/platform.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "carbosim/error.hpp"
#include "text_util.hpp"

namespace carbosim {

namespace pt = boost::property_tree;
using detail::parse_double;
using detail::trim;

CiSourceRef CiSourceRef::constant(double g_per_kwh) {
    CiSourceRef ref;
    ref.kind = Kind::Constant;
    ref.constant_g_per_kwh = g_per_kwh;
    return ref;
}

CiSourceRef CiSourceRef::trace(std::string name) {
    CiSourceRef ref;
    ref.kind = Kind::Trace;
    ref.trace_name = std::move(name);
    return ref;
}

PowerProfile parse_power_profile(const std::string& text, const std::string& off_text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ':'))
        parts.push_back(token);

    if (parts.size() != 3)
        throw ParseError("wattage_per_state '" + text + "': expected three colon-separated values");

    PowerProfile profile;
    profile.idle_w = parse_double(parts[0], "wattage_per_state idle");
    profile.epsilon_w = parse_double(parts[1], "wattage_per_state epsilon");
    profile.allcores_w = parse_double(parts[2], "wattage_per_state allcores");
    profile.off_w = parse_double(off_text, "wattage_off");

    for (double w : {profile.idle_w, profile.epsilon_w, profile.allcores_w, profile.off_w})
        if (w < 0.0)
            throw ParseError("negative wattage in '" + text + "' / '" + off_text + "'");

    if (profile.idle_w > profile.epsilon_w || profile.epsilon_w > profile.allcores_w)
        throw OrderingViolation("wattage_per_state '" + text +
                                "': expected idle <= epsilon <= allcores");

    return profile;
}

namespace {

// SimGrid-style speed: number plus optional FLOP/s suffix ("12Gf" -> 12e9).
double parse_speed(const std::string& text, const std::string& host_id) {
    std::string t = trim(text);
    const std::string context = "host '" + host_id + "' speed";
    static const std::map<std::string, double> suffixes = {
        {"f", 1.0}, {"kf", 1e3}, {"mf", 1e6}, {"gf", 1e9}, {"tf", 1e12}};

    std::string lower = t;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

    double multiplier = 1.0;
    for (const auto& [suffix, value] : suffixes) {
        if (lower.size() > suffix.size() && lower.ends_with(suffix)) {
            // plain "f" must not strip the 'f' of "Gf" etc.
            if (suffix == "f" && lower.size() >= 2 && std::isalpha(static_cast<unsigned char>(lower[lower.size() - 2])))
                continue;
            multiplier = value;
            t = t.substr(0, t.size() - suffix.size());
            break;
        }
    }

    double v = parse_double(t, context) * multiplier;
    if (v <= 0.0)
        throw ParseError(context + ": must be > 0, got '" + text + "'");
    return v;
}

struct HostProps {
    std::map<std::string, std::string> values;
};

void collect_hosts(const pt::ptree& node, std::vector<const pt::ptree*>& hosts,
                   std::set<std::string>& skipped, std::vector<std::string>* warnings) {
    for (const auto& [name, child] : node) {
        if (name == "<xmlattr>" || name == "<xmlcomment>")
            continue;
        if (name == "host") {
            hosts.push_back(&child);
            continue;
        }
        // platform/zone are structural wrappers; anything else is outside
        // the accepted subset and gets skipped with a note.
        if (name != "platform" && name != "zone" && warnings && skipped.insert(name).second)
            warnings->push_back("platform: ignoring element '" + name + "'");
        collect_hosts(child, hosts, skipped, warnings);
    }
}

HostSpec parse_host(const pt::ptree& node, std::vector<std::string>* warnings) {
    const auto attrs = node.get_child_optional("<xmlattr>");
    auto attr = [&](const char* name) -> std::optional<std::string> {
        if (!attrs)
            return std::nullopt;
        if (auto v = attrs->get_optional<std::string>(name))
            return *v;
        return std::nullopt;
    };

    auto id = attr("id");
    if (!id || trim(*id).empty())
        throw ParseError("host element: missing required attribute 'id'");

    HostSpec host;
    host.id = trim(*id);

    auto speed = attr("speed");
    if (!speed)
        throw ParseError("host '" + host.id + "': missing required attribute 'speed'");
    host.speed_per_core = parse_speed(*speed, host.id);

    auto core = attr("core");
    if (!core)
        throw ParseError("host '" + host.id + "': missing required attribute 'core'");
    long long cores = detail::parse_integer(*core, "host '" + host.id + "' core");
    if (cores < 1 || cores > std::numeric_limits<int>::max())
        throw ParseError("host '" + host.id + "': core must be in [1, 2^31), got " + *core);
    host.core_count = static_cast<int>(cores);

    // Gather props; unknown ones are skipped with a note.
    std::map<std::string, std::string> props;
    std::set<std::string> skipped_props;
    for (const auto& [name, child] : node) {
        if (name != "prop")
            continue;
        auto pid = child.get_optional<std::string>("<xmlattr>.id");
        auto pvalue = child.get_optional<std::string>("<xmlattr>.value");
        if (!pid || !pvalue)
            throw ParseError("host '" + host.id + "': prop element missing id or value");
        if (!props.emplace(*pid, *pvalue).second)
            throw ParseError("host '" + host.id + "': duplicate prop '" + *pid + "'");
    }
    static const std::set<std::string> known = {"wattage_per_state", "wattage_off",
                                                "carbon_intensity", "carbon_intensity_trace"};
    for (const auto& [name, value] : props) {
        (void)value;
        if (!known.count(name) && warnings)
            warnings->push_back("host '" + host.id + "': ignoring prop '" + name + "'");
    }

    auto wps = props.find("wattage_per_state");
    if (wps == props.end())
        throw ParseError("host '" + host.id + "': missing required prop 'wattage_per_state'");

    std::string off_text = "0";
    auto off = props.find("wattage_off");
    if (off != props.end()) {
        off_text = off->second;
    } else if (warnings) {
        warnings->push_back("host '" + host.id + "': missing prop 'wattage_off', defaulting to 0 W");
    }

    try {
        host.profile = parse_power_profile(wps->second, off_text);
    } catch (const OrderingViolation& e) {
        throw OrderingViolation("host '" + host.id + "': " + e.what());
    } catch (const ParseError& e) {
        throw ParseError("host '" + host.id + "': " + e.what());
    }

    auto ci_const = props.find("carbon_intensity");
    auto ci_trace = props.find("carbon_intensity_trace");
    if (ci_const != props.end() && ci_trace != props.end())
        throw ParseError("host '" + host.id +
                         "': carbon_intensity and carbon_intensity_trace are mutually exclusive");
    if (ci_const != props.end()) {
        double v = parse_double(ci_const->second, "host '" + host.id + "' carbon_intensity");
        if (v < 0.0)
            throw ParseError("host '" + host.id + "': carbon_intensity must be >= 0");
        host.ci_source = CiSourceRef::constant(v);
    } else if (ci_trace != props.end()) {
        std::string name = trim(ci_trace->second);
        if (name.empty())
            throw ParseError("host '" + host.id + "': empty carbon_intensity_trace");
        host.ci_source = CiSourceRef::trace(name);
    } else {
        host.ci_source = CiSourceRef::constant(0.0);
        if (warnings)
            warnings->push_back("host '" + host.id +
                                "': no carbon_intensity configured, defaulting to 0 g/kWh");
    }

    return host;
}

} // namespace

PlatformSpec parse_platform(const std::string& document, std::vector<std::string>* warnings) {
    pt::ptree tree;
    try {
        std::istringstream in(document);
        pt::read_xml(in, tree);
    } catch (const pt::xml_parser_error& e) {
        throw ParseError(std::string("platform: malformed XML: ") + e.what());
    }

    std::vector<const pt::ptree*> host_nodes;
    std::set<std::string> skipped;
    collect_hosts(tree, host_nodes, skipped, warnings);

    PlatformSpec spec;
    std::set<std::string> seen_ids;
    for (const pt::ptree* node : host_nodes) {
        HostSpec host = parse_host(*node, warnings);
        if (!seen_ids.insert(host.id).second)
            throw DuplicateHostId("platform: duplicate host id '" + host.id + "'");
        spec.hosts.push_back(std::move(host));
    }

    if (spec.hosts.empty())
        throw ParseError("platform: no host element found");

    return spec;
}

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

using detail::exact_number;

} // namespace

std::string serialize_platform(const PlatformSpec& spec) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\"?>\n<platform>\n";
    for (const HostSpec& host : spec.hosts) {
        out << "  <host id=\"" << xml_escape(host.id) << "\" speed=\""
            << exact_number(host.speed_per_core) << "f\" core=\"" << host.core_count << "\">\n";
        out << "    <prop id=\"wattage_per_state\" value=\"" << exact_number(host.profile.idle_w)
            << ":" << exact_number(host.profile.epsilon_w) << ":"
            << exact_number(host.profile.allcores_w) << "\" />\n";
        out << "    <prop id=\"wattage_off\" value=\"" << exact_number(host.profile.off_w)
            << "\" />\n";
        if (host.ci_source.kind == CiSourceRef::Kind::Constant) {
            out << "    <prop id=\"carbon_intensity\" value=\""
                << exact_number(host.ci_source.constant_g_per_kwh) << "\" />\n";
        } else {
            out << "    <prop id=\"carbon_intensity_trace\" value=\""
                << xml_escape(host.ci_source.trace_name) << "\" />\n";
        }
        out << "  </host>\n";
    }
    out << "</platform>\n";
    return out.str();
}

std::vector<PlatformViolation> validate_platform(const PlatformSpec& spec) {
    std::vector<PlatformViolation> violations;
    auto add = [&](const std::string& host, const std::string& field, const std::string& msg) {
        violations.push_back({host, field, msg});
    };

    if (spec.hosts.empty())
        add("", "hosts", "platform must contain at least one host");

    std::set<std::string> ids;
    for (const HostSpec& host : spec.hosts) {
        if (!ids.insert(host.id).second)
            add(host.id, "id", "duplicate host id");
        if (host.core_count < 1)
            add(host.id, "core_count", "must be >= 1");
        if (!(host.speed_per_core > 0.0) || !std::isfinite(host.speed_per_core))
            add(host.id, "speed_per_core", "must be finite and > 0");

        const PowerProfile& p = host.profile;
        auto check_w = [&](double w, const char* field) {
            if (w < 0.0 || !std::isfinite(w))
                add(host.id, field, "must be finite and >= 0");
        };
        check_w(p.idle_w, "idle_w");
        check_w(p.epsilon_w, "epsilon_w");
        check_w(p.allcores_w, "allcores_w");
        check_w(p.off_w, "off_w");
        if (p.idle_w > p.epsilon_w || p.epsilon_w > p.allcores_w)
            add(host.id, "wattage_per_state", "expected idle <= epsilon <= allcores");

        if (host.ci_source.kind == CiSourceRef::Kind::Constant) {
            if (host.ci_source.constant_g_per_kwh < 0.0 ||
                !std::isfinite(host.ci_source.constant_g_per_kwh))
                add(host.id, "carbon_intensity", "must be finite and >= 0");
        } else if (host.ci_source.trace_name.empty()) {
            add(host.id, "carbon_intensity_trace", "trace name must not be empty");
        }
    }

    return violations;
}

} // namespace carbosim
