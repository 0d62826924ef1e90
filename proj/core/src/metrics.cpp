#include "carbosim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "carbosim/error.hpp"
#include "text_util.hpp"

namespace carbosim {

std::vector<MeasurementRun> load_measurements(const std::string& document,
                                              const ColumnMap& columns) {
    auto lines = detail::data_lines(document);
    if (lines.empty())
        return {};

    auto header = detail::split_csv_line(lines[0]);
    auto column_index = [&](const std::string& name) -> int {
        for (size_t i = 0; i < header.size(); ++i)
            if (detail::trim(header[i]) == name)
                return static_cast<int>(i);
        return -1;
    };

    int energy_col = column_index(columns.energy);
    if (energy_col < 0)
        throw ParseError("measurements: missing column '" + columns.energy + "'");
    int emissions_col = column_index(columns.emissions);
    if (emissions_col < 0)
        throw ParseError("measurements: missing column '" + columns.emissions + "'");
    int run_id_col = column_index(columns.run_id);   // optional
    int label_col = column_index(columns.label);     // optional

    std::vector<MeasurementRun> runs;
    for (size_t row = 1; row < lines.size(); ++row) {
        auto fields = detail::split_csv_line(lines[row]);
        auto cell = [&](int col) -> std::string {
            if (col < 0 || static_cast<size_t>(col) >= fields.size())
                throw ParseError("measurements row " + std::to_string(row) + ": too few fields");
            return fields[static_cast<size_t>(col)];
        };

        MeasurementRun run;
        const std::string context = "measurements row " + std::to_string(row);
        run.energy_kwh = detail::parse_double(cell(energy_col), context + " energy");
        run.emissions_kg = detail::parse_double(cell(emissions_col), context + " emissions");
        if (run.energy_kwh < 0.0 || run.emissions_kg < 0.0)
            throw ParseError(context + ": negative measurement");
        if (run_id_col >= 0) {
            run.run_id = detail::trim(cell(run_id_col));
        } else {
            char buf[16];
            std::snprintf(buf, sizeof buf, "%06zu", row - 1);
            run.run_id = buf;
        }
        if (label_col >= 0)
            run.label = detail::trim(cell(label_col));
        runs.push_back(std::move(run));
    }
    return runs;
}

namespace {

void require_same_length(const std::vector<double>& a, const std::vector<double>& b,
                         const char* what) {
    if (a.size() != b.size())
        throw MetricsError(std::string(what) + ": series lengths differ (" +
                           std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
}

} // namespace

double r2(const std::vector<double>& y_true, const std::vector<double>& y_pred) {
    require_same_length(y_true, y_pred, "r2");
    if (y_true.size() < 2)
        throw MetricsError("r2: needs at least two samples");

    double mean = std::accumulate(y_true.begin(), y_true.end(), 0.0) /
                  static_cast<double>(y_true.size());
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (size_t i = 0; i < y_true.size(); ++i) {
        ss_res += (y_true[i] - y_pred[i]) * (y_true[i] - y_pred[i]);
        ss_tot += (y_true[i] - mean) * (y_true[i] - mean);
    }
    if (ss_tot == 0.0)
        throw MetricsError("r2: y_true has zero variance");
    return 1.0 - ss_res / ss_tot;
}

double mape(const std::vector<double>& y_true, const std::vector<double>& y_pred) {
    require_same_length(y_true, y_pred, "mape");
    if (y_true.empty())
        throw MetricsError("mape: empty series");

    double sum = 0.0;
    for (size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == 0.0)
            throw MetricsError("mape: y_true contains a zero at index " + std::to_string(i));
        sum += std::abs(y_true[i] - y_pred[i]) / std::abs(y_true[i]);
    }
    return 100.0 * sum / static_cast<double>(y_true.size());
}

double rmse(const std::vector<double>& y_true, const std::vector<double>& y_pred) {
    require_same_length(y_true, y_pred, "rmse");
    if (y_true.empty())
        throw MetricsError("rmse: empty series");

    double sum = 0.0;
    for (size_t i = 0; i < y_true.size(); ++i)
        sum += (y_true[i] - y_pred[i]) * (y_true[i] - y_pred[i]);
    return std::sqrt(sum / static_cast<double>(y_true.size()));
}

MetricsReport compare(std::vector<MeasurementRun> real, std::vector<MeasurementRun> simulated,
                      CompareQuantity quantity) {
    if (real.size() != simulated.size())
        throw MetricsError("compare: run counts differ (" + std::to_string(real.size()) +
                           " real vs " + std::to_string(simulated.size()) + " simulated)");
    if (real.empty())
        throw MetricsError("compare: no runs to compare");

    const std::string label = real.front().label;
    for (const auto& run : real)
        if (run.label != label)
            throw MetricsError("compare: real runs mix labels '" + label + "' and '" + run.label +
                               "'");
    for (const auto& run : simulated)
        if (run.label != label)
            throw MetricsError("compare: simulated label '" + run.label + "' does not match '" +
                               label + "'");

    auto by_run_id = [](const MeasurementRun& a, const MeasurementRun& b) {
        return a.run_id < b.run_id;
    };
    std::sort(real.begin(), real.end(), by_run_id);
    std::sort(simulated.begin(), simulated.end(), by_run_id);

    auto extract = [&](const std::vector<MeasurementRun>& runs) {
        std::vector<double> values;
        values.reserve(runs.size());
        for (const auto& run : runs)
            values.push_back(quantity == CompareQuantity::EnergyKwh ? run.energy_kwh
                                                                    : run.emissions_kg);
        return values;
    };
    std::vector<double> y_true = extract(real);
    std::vector<double> y_pred = extract(simulated);

    MetricsReport report;
    report.label = label;
    report.n = y_true.size();
    report.r2 = r2(y_true, y_pred);
    report.mape_percent = mape(y_true, y_pred);
    report.rmse = rmse(y_true, y_pred);
    return report;
}

BoxplotStats boxplot_stats(std::vector<double> values) {
    if (values.empty())
        throw MetricsError("boxplot_stats: empty series");
    std::sort(values.begin(), values.end());

    // Quantile with linear interpolation between order statistics.
    auto quantile = [&](double q) {
        double pos = q * static_cast<double>(values.size() - 1);
        size_t lo = static_cast<size_t>(pos);
        size_t hi = std::min(lo + 1, values.size() - 1);
        double frac = pos - static_cast<double>(lo);
        return values[lo] * (1.0 - frac) + values[hi] * frac;
    };

    BoxplotStats stats;
    stats.n = values.size();
    stats.min = values.front();
    stats.q1 = quantile(0.25);
    stats.median = quantile(0.5);
    stats.q3 = quantile(0.75);
    stats.max = values.back();
    return stats;
}

const char* to_string(CompareQuantity quantity) {
    return quantity == CompareQuantity::EnergyKwh ? "energy_kwh" : "emissions_kg";
}

std::string render_metrics_csv(const MetricsReport& report, CompareQuantity quantity) {
    std::ostringstream out;
    out << "label,quantity,n,r2,mape_percent,rmse\n";
    out << report.label << "," << to_string(quantity) << "," << report.n << ","
        << detail::exact_number(report.r2) << "," << detail::exact_number(report.mape_percent)
        << "," << detail::exact_number(report.rmse) << "\n";
    return out.str();
}

std::string render_metrics_table(const MetricsReport& report, CompareQuantity quantity) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%-16s %-12s %6zu %12.4f %12.2f %14.6g\n",
                  report.label.empty() ? "(unlabeled)" : report.label.c_str(),
                  to_string(quantity), report.n, report.r2, report.mape_percent, report.rmse);
    std::ostringstream out;
    out << "label            quantity          n           r2      mape_%            rmse\n"
        << buf;
    return out.str();
}

} // namespace carbosim
