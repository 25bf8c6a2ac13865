#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dmc {

struct Sample {
    std::vector<double> values;
    std::string label;
};

enum class Alternative { Less, Greater, TwoSided };
enum class TestMethod { Exact, NormalApproximation };

std::string to_string(Alternative a);
std::string to_string(TestMethod m);

struct TestResult {
    double statistic = 0.0;  // U for Mann-Whitney, W for Wilcoxon
    double z = 0.0;          // 0 under the exact method
    double p_value = 1.0;
    TestMethod method = TestMethod::Exact;
    Alternative alternative = Alternative::TwoSided;
};

struct SummaryStats {
    std::size_t n = 0;
    double min = 0.0;
    double q1 = 0.0;     // Tukey hinges
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double sd = 0.0;     // sample standard deviation, n-1 denominator
};

SummaryStats describe(const Sample& s);

// Exact p by labeling enumeration when both sides have at most 8 values,
// otherwise normal approximation with tie and continuity corrections. The
// statistic is U of the first sample; ties contribute half to U.
TestResult mann_whitney(const Sample& a, const Sample& b,
                        Alternative alternative = Alternative::TwoSided);

// Differences are first-minus-second; zero differences are dropped. Exact p
// by sign enumeration up to 12 nonzero pairs. W is the smaller signed-rank
// sum. Alternative Greater means a positive shift of the first coordinate.
TestResult wilcoxon_signed_rank(const std::vector<std::pair<double, double>>& pairs,
                                Alternative alternative = Alternative::TwoSided);

struct CorrelationResult {
    double rho = 0.0;
    double t = 0.0;
    double p_value = 1.0;
    TestMethod method = TestMethod::Exact;
    Alternative alternative = Alternative::TwoSided;
};

// Spearman rank correlation with average ranks for ties. Exact permutation p
// for n <= 8, otherwise the t approximation with n-2 degrees of freedom.
CorrelationResult spearman(const Sample& x, const Sample& y,
                           Alternative alternative = Alternative::TwoSided);

struct AnswerTally {
    std::vector<std::int64_t> counts;  // one entry per option; K = size
};

// 1 when all answers land on one option, 0 when they spread uniformly.
double misinterpretation_rate(const AnswerTally& tally);

}  // namespace dmc
