#pragma once

#include <string>
#include <vector>

#include "dmc/model.hpp"

namespace dmc {

struct MetricStability {
    std::string metric;
    double observed = 0.0;
    double intended = 0.0;
    double distance = 0.0;  // may be +infinity
    bool stable = true;
};

struct StabilityReport {
    std::vector<MetricStability> per_metric;
    double overall_instability = 0.0;  // 1 - (stable flags / metric count)
    bool stable = true;
    double threshold = 0.2;
};

// |observed - intended| / intended; 0 when both are zero; +infinity when the
// intended value is zero and the observed is not. Negative inputs throw.
double distance(double observed, double intended);

// 1 (stable) when 0 <= d <= threshold, else 0. The boundary is inclusive.
int metric_stability(double d, double threshold = 0.2);

// Stability over explicit (metric, observed, intended) rows.
struct MetricValuePair {
    std::string metric;
    double observed = 0.0;
    double intended = 0.0;
};

StabilityReport stability_from_values(const std::vector<MetricValuePair>& rows,
                                      double threshold = 0.2);

// Computes the selected model metrics on both models and classifies. An empty
// selection throws; the default is the model-level suite.
StabilityReport assess_stability(const Model& composed, const Model& intended,
                                 const std::vector<std::string>& metric_selection = {},
                                 double threshold = 0.2);

}  // namespace dmc
