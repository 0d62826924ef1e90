#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "carbosim/engine.hpp"
#include "carbosim/error.hpp"
#include "carbosim/metrics.hpp"
#include "carbosim/trace.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw carbosim::IoError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void ensure_output_dir(const std::string& prefix) {
    fs::path parent = fs::path(prefix).parent_path();
    if (!parent.empty())
        fs::create_directories(parent);
}

struct SimulateConfig {
    std::string platform_path;
    std::string workload_path;
    std::string events_path;
    std::string output_prefix;
    bool carbon_enabled = false;
    double end_time = 0.0;
};

struct CompareConfig {
    std::string real_path;
    std::string sim_path;
    std::string quantity = "energy_kwh";
    std::string output_prefix;
    bool boxplot = false;
    carbosim::ColumnMap columns;
};

int run_simulate(const SimulateConfig& config) {
    using namespace carbosim;

    std::vector<std::string> warnings;
    PlatformSpec platform = parse_platform(read_file(config.platform_path), &warnings);
    Workload workload = parse_workload(read_file(config.workload_path));

    std::vector<ExternalEvent> events;
    if (!config.events_path.empty())
        events = parse_events(read_file(config.events_path));

    SimulationOptions options;
    options.carbon_enabled = config.carbon_enabled;
    options.end_time = config.end_time;

    // Trace props name files relative to the platform file's directory.
    const fs::path platform_dir = fs::path(config.platform_path).parent_path();
    for (const HostSpec& host : platform.hosts) {
        if (host.ci_source.kind != CiSourceRef::Kind::Trace)
            continue;
        const std::string& name = host.ci_source.trace_name;
        if (options.ci_traces.count(name))
            continue;
        fs::path trace_path = fs::path(name);
        if (trace_path.is_relative())
            trace_path = platform_dir / trace_path;
        options.ci_traces[name] = parse_ci_series(read_file(trace_path.string()));
    }

    SimulationResult result = run_simulation(platform, workload, events, options);
    for (const std::string& w : warnings)
        std::cerr << "warning: " << w << "\n";
    for (const std::string& w : result.warnings)
        std::cerr << "warning: " << w << "\n";

    ensure_output_dir(config.output_prefix);
    write_trace(result.trace, config.output_prefix + "_trace.csv");
    write_summary(result.per_host_summary, config.output_prefix + "_hosts.csv");

    double energy = 0.0;
    double carbon = 0.0;
    for (const HostSummary& host : result.per_host_summary) {
        energy += host.energy_j;
        carbon += host.carbon_g;
    }
    std::cout << "makespan_s: " << format_number(result.makespan) << "\n";
    std::cout << "total_energy_j: " << format_number(energy) << "\n";
    std::cout << "total_carbon_g: " << format_number(carbon) << "\n";
    if (!result.rejected_jobs.empty())
        std::cout << "rejected_jobs: " << result.rejected_jobs.size() << "\n";
    return 0;
}

int run_compare(const CompareConfig& config) {
    using namespace carbosim;

    auto real = load_measurements(read_file(config.real_path), config.columns);
    auto sim = load_measurements(read_file(config.sim_path), config.columns);

    CompareQuantity quantity = config.quantity == "energy_kwh" ? CompareQuantity::EnergyKwh
                                                               : CompareQuantity::EmissionsKg;
    MetricsReport report = compare(real, sim, quantity);

    std::cout << render_metrics_table(report, quantity);
    ensure_output_dir(config.output_prefix);
    write_text_atomically(render_metrics_csv(report, quantity),
                          config.output_prefix + "_metrics.csv");

    if (config.boxplot) {
        auto extract = [&](const std::vector<MeasurementRun>& runs) {
            std::vector<double> values;
            for (const auto& run : runs)
                values.push_back(quantity == CompareQuantity::EnergyKwh ? run.energy_kwh
                                                                        : run.emissions_kg);
            return values;
        };
        std::ostringstream out;
        out << "label,series,n,min,q1,median,q3,max\n";
        for (auto& [series, values] :
             {std::pair{std::string("real"), extract(real)}, {std::string("sim"), extract(sim)}}) {
            BoxplotStats stats = boxplot_stats(values);
            out << report.label << "," << series << "," << stats.n << ","
                << format_number(stats.min) << "," << format_number(stats.q1) << ","
                << format_number(stats.median) << "," << format_number(stats.q3) << ","
                << format_number(stats.max) << "\n";
        }
        write_text_atomically(out.str(), config.output_prefix + "_boxplot.csv");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"carbosim: data-center job simulator with energy and CO2 accounting"};
    app.require_subcommand(1);

    SimulateConfig sim_config;
    CLI::App* simulate = app.add_subcommand("simulate", "Run a workload on a platform");
    simulate->add_option("-p,--platform", sim_config.platform_path, "Platform XML file")
        ->required();
    simulate->add_option("-w,--workload", sim_config.workload_path, "Workload JSON file")
        ->required();
    simulate->add_option("-e,--events", sim_config.events_path, "External events CSV file");
    simulate->add_flag("-C,--carbon-footprint", sim_config.carbon_enabled,
                       "Enable carbon footprint accounting");
    simulate->add_option("-o,--output", sim_config.output_prefix,
                         "Output prefix for <prefix>_trace.csv and <prefix>_hosts.csv")
        ->required();
    simulate->add_option("--until", sim_config.end_time,
                         "Keep accounting running at least until this time (seconds)");

    CompareConfig cmp_config;
    CLI::App* cmp = app.add_subcommand("compare", "Grade simulated runs against measurements");
    cmp->add_option("--real", cmp_config.real_path, "Measured runs CSV (CodeCarbon schema)")
        ->required();
    cmp->add_option("--sim", cmp_config.sim_path, "Simulated runs CSV")->required();
    cmp->add_option("--quantity", cmp_config.quantity, "Quantity to compare")
        ->check(CLI::IsMember({"energy_kwh", "emissions_kg"}))
        ->capture_default_str();
    cmp->add_option("-o,--output", cmp_config.output_prefix,
                    "Output prefix for <prefix>_metrics.csv")
        ->required();
    cmp->add_flag("--boxplot", cmp_config.boxplot, "Also write <prefix>_boxplot.csv quartiles");
    cmp->add_option("--energy-col", cmp_config.columns.energy, "Energy column name")
        ->capture_default_str();
    cmp->add_option("--emissions-col", cmp_config.columns.emissions, "Emissions column name")
        ->capture_default_str();
    cmp->add_option("--run-id-col", cmp_config.columns.run_id, "Run id column name")
        ->capture_default_str();
    cmp->add_option("--label-col", cmp_config.columns.label, "Label column name")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2; // usage error
    }

    try {
        if (app.got_subcommand(simulate))
            return run_simulate(sim_config);
        return run_compare(cmp_config);
    } catch (const carbosim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
