#include "dmc/stability.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dmc/metrics.hpp"

namespace dmc {

double distance(double observed, double intended) {
    if (observed < 0.0 || intended < 0.0) {
        throw std::invalid_argument("distance requires non-negative metric values");
    }
    if (intended == 0.0) {
        return observed == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return std::fabs(observed - intended) / intended;
}

int metric_stability(double d, double threshold) {
    if (std::isnan(d) || d < 0.0) {
        throw std::invalid_argument("distance must be non-negative");
    }
    return d <= threshold ? 1 : 0;
}

StabilityReport stability_from_values(const std::vector<MetricValuePair>& rows,
                                      double threshold) {
    if (rows.empty()) throw std::invalid_argument("metric selection must be non-empty");
    StabilityReport report;
    report.threshold = threshold;
    int stable_count = 0;
    for (const auto& row : rows) {
        MetricStability ms;
        ms.metric = row.metric;
        ms.observed = row.observed;
        ms.intended = row.intended;
        ms.distance = distance(row.observed, row.intended);
        ms.stable = metric_stability(ms.distance, threshold) == 1;
        if (ms.stable) ++stable_count;
        report.per_metric.push_back(std::move(ms));
    }
    const double j = static_cast<double>(rows.size());
    report.overall_instability = 1.0 - static_cast<double>(stable_count) / j;
    report.stable = report.overall_instability <= threshold;
    return report;
}

StabilityReport assess_stability(const Model& composed, const Model& intended,
                                 const std::vector<std::string>& metric_selection,
                                 double threshold) {
    const std::vector<std::string>& selection =
        metric_selection.empty() ? model_metric_ids() : metric_selection;
    if (selection.empty()) throw std::invalid_argument("metric selection must be non-empty");

    const MetricRecord observed = model_metrics(composed);
    const MetricRecord wanted = model_metrics(intended);
    std::vector<MetricValuePair> rows;
    rows.reserve(selection.size());
    for (const auto& id : selection) {
        rows.push_back({id, observed.at(id), wanted.at(id)});
    }
    return stability_from_values(rows, threshold);
}

}  // namespace dmc
