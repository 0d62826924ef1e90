#pragma once

#include <string>
#include <vector>

namespace carbosim {

/// One row of a measurement CSV (CodeCarbon-style schema).
struct MeasurementRun {
    std::string run_id;
    std::string label;        // benchmark name
    double energy_kwh = 0.0;
    double emissions_kg = 0.0;
};

enum class CompareQuantity { EnergyKwh, EmissionsKg };

struct MetricsReport {
    std::string label;
    double r2 = 0.0;
    double mape_percent = 0.0;
    double rmse = 0.0;
    std::size_t n = 0;
};

/// Column names to read from a measurement CSV. energy and emissions are
/// required columns; run_id falls back to a zero-padded row index and
/// label to "" when their columns are absent.
struct ColumnMap {
    std::string energy = "cpu_energy";       // kWh
    std::string emissions = "emissions";     // kg CO2
    std::string run_id = "run_id";
    std::string label = "project_name";
};

/// Five-number summary for plot-ready boxplot dumps.
struct BoxplotStats {
    std::size_t n = 0;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

/// Load measurement rows from CSV text. Throws ParseError on a missing
/// required column or a non-numeric cell.
std::vector<MeasurementRun> load_measurements(const std::string& document,
                                              const ColumnMap& columns = {});

/// Coefficient of determination: 1 - SS_res / SS_tot. Requires n >= 2 and
/// non-constant y_true. Negative when the prediction is worse than the
/// mean baseline.
double r2(const std::vector<double>& y_true, const std::vector<double>& y_pred);

/// Mean absolute percentage error, in percent. Refuses zeros in y_true
/// rather than substituting an epsilon.
double mape(const std::vector<double>& y_true, const std::vector<double>& y_pred);

/// Root mean square error, in the units of the inputs.
double rmse(const std::vector<double>& y_true, const std::vector<double>& y_pred);

/// Pair real and simulated runs (both sorted by run_id, index by index)
/// and compute all three metrics on the chosen quantity. Throws
/// MetricsError on count or label mismatch.
MetricsReport compare(std::vector<MeasurementRun> real, std::vector<MeasurementRun> simulated,
                      CompareQuantity quantity);

/// Quartiles with linear interpolation between order statistics.
BoxplotStats boxplot_stats(std::vector<double> values);

/// CSV for a metrics report: `label,quantity,n,r2,mape_percent,rmse`.
std::string render_metrics_csv(const MetricsReport& report, CompareQuantity quantity);

/// Fixed-width table for standard output.
std::string render_metrics_table(const MetricsReport& report, CompareQuantity quantity);

const char* to_string(CompareQuantity quantity);

} // namespace carbosim
