#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dmc/stability.hpp"
#include "support/fixtures.hpp"

using namespace dmc;
using namespace dmc::testing;

TEST_CASE("distance is the relative deviation against the intended value") {
    CHECK(distance(8, 10) == doctest::Approx(0.2));
    CHECK(distance(7, 9) == doctest::Approx(2.0 / 9.0));
    CHECK(distance(12, 14) == doctest::Approx(1.0 / 7.0));
    CHECK(distance(5, 5) == 0.0);
    CHECK(distance(0, 0) == 0.0);
    CHECK(std::isinf(distance(3, 0)));
    CHECK_THROWS_AS(distance(-1, 5), std::invalid_argument);
    CHECK_THROWS_AS(distance(5, -1), std::invalid_argument);
}

TEST_CASE("distance scales and is zero only at equality") {
    for (double k : {0.5, 2.0, 7.0}) {
        CHECK(distance(8 * k, 10 * k) == doctest::Approx(distance(8, 10)));
    }
    CHECK(distance(9, 9) == 0.0);
    CHECK(distance(9.0001, 9) > 0.0);
}

TEST_CASE("the stability flag is inclusive at the threshold") {
    CHECK(metric_stability(0.2) == 1);
    CHECK(metric_stability(0.2222) == 0);
    CHECK(metric_stability(0.0) == 1);
    CHECK(metric_stability(std::numeric_limits<double>::infinity()) == 0);
    CHECK(metric_stability(0.25, 0.3) == 1);
}

TEST_CASE("the worked five-metric example evaluates to a stable 0.2") {
    const std::vector<MetricValuePair> rows = {
        {"NClass", 8, 10}, {"DepOut", 12, 14}, {"NAttr", 7, 9},
        {"NInter", 15, 17}, {"DIT", 11, 13},
    };
    const StabilityReport report = stability_from_values(rows);
    REQUIRE(report.per_metric.size() == 5);
    CHECK(report.per_metric[0].distance == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(report.per_metric[1].distance == doctest::Approx(0.142857142857).epsilon(1e-9));
    CHECK(report.per_metric[2].distance == doctest::Approx(0.222222222222).epsilon(1e-9));
    CHECK(report.per_metric[3].distance == doctest::Approx(0.117647058824).epsilon(1e-9));
    CHECK(report.per_metric[4].distance == doctest::Approx(0.153846153846).epsilon(1e-9));
    const std::vector<bool> flags = {true, true, false, true, true};
    for (std::size_t i = 0; i < flags.size(); ++i) {
        CHECK(report.per_metric[i].stable == flags[i]);
    }
    CHECK(report.overall_instability == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(report.stable);
}

TEST_CASE("identical models are fully stable") {
    const Model m = figure1_intended();
    const StabilityReport report = assess_stability(m, m);
    CHECK(report.overall_instability == 0.0);
    CHECK(report.stable);
    for (const auto& pm : report.per_metric) CHECK(pm.stable);
}

TEST_CASE("doubling every count makes every varying metric unstable") {
    Model intended;
    intended.name = "I";
    Element c = classifier(ElementKind::Class, "C");
    c.attributes.push_back(attr("a", "int"));
    c.operations.push_back(op("m", "void"));
    intended.elements.push_back(std::move(c));
    intended.elements.push_back(classifier(ElementKind::Interface, "I1"));
    intended = normalize(intended);

    Model composed = intended;
    Element d = classifier(ElementKind::Class, "D");
    d.attributes.push_back(attr("b", "int"));
    d.operations.push_back(op("n", "void"));
    composed.elements.push_back(std::move(d));
    composed.elements.push_back(classifier(ElementKind::Interface, "I2"));
    composed = normalize(composed);

    const StabilityReport report =
        assess_stability(composed, intended, {"NClass", "NAttr", "NOps", "NInter"});
    CHECK(report.overall_instability == doctest::Approx(1.0));
    CHECK_FALSE(report.stable);
}

TEST_CASE("classification ignores metric order") {
    const Model composed = figure1_base();
    const Model intended = figure1_intended();
    std::vector<std::string> selection = {"NClass", "NAttr", "NOps", "DIT"};
    const StabilityReport forward = assess_stability(composed, intended, selection);
    std::reverse(selection.begin(), selection.end());
    const StabilityReport backward = assess_stability(composed, intended, selection);
    CHECK(forward.overall_instability == backward.overall_instability);
    CHECK(forward.stable == backward.stable);
}

TEST_CASE("instability moves monotonically with flipped flags") {
    std::vector<MetricValuePair> rows = {{"a", 10, 10}, {"b", 10, 10}, {"c", 10, 10}};
    double last = stability_from_values(rows).overall_instability;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].observed = 100;  // far past the threshold
        const double next = stability_from_values(rows).overall_instability;
        CHECK(next > last);
        last = next;
    }
    CHECK(last == doctest::Approx(1.0));
}

TEST_CASE("an empty metric selection is rejected") {
    CHECK_THROWS_AS(stability_from_values({}), std::invalid_argument);
}

TEST_CASE("a zero intended value with nonzero observed forces instability") {
    const StabilityReport report = stability_from_values({{"NClass", 3, 0}});
    CHECK(std::isinf(report.per_metric[0].distance));
    CHECK_FALSE(report.per_metric[0].stable);
    CHECK_FALSE(report.stable);
}
