#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dmc/model.hpp"

namespace dmc {

struct MetricRecord {
    std::string subject;
    std::vector<std::pair<std::string, double>> values;  // canonical metric order

    double at(const std::string& metric) const;
    bool has(const std::string& metric) const;
};

// Table-style per-classifier suites. Each throws std::invalid_argument when
// the subject does not resolve to the expected kind.
MetricRecord class_metrics(const Model& m, const std::string& class_qn);
MetricRecord interface_metrics(const Model& m, const std::string& interface_qn);
MetricRecord component_metrics(const Model& m, const std::string& component_qn);

// Model-level suite: NClass, NAttr, NOps, NInter, NOI, DIT, InhOps, InhAttr,
// DepOut, DepIn. DIT/InhOps/InhAttr/DepOut/DepIn are sums over classes.
MetricRecord model_metrics(const Model& m);

// The model-level metric identifiers, in canonical order.
const std::vector<std::string>& model_metric_ids();

}  // namespace dmc
