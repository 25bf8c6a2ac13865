#include "doctest.h"

#include <algorithm>
#include <random>

#include "dmc/stats.hpp"
#include "support/random_models.hpp"

using namespace dmc;
using dmc::testing::Rng;

namespace {

// Brute-force labeling oracle for the exact Mann-Whitney p-value. Independent
// of the implementation: enumerates index subsets of the pooled raw values.
double mw_oracle_p_less(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> pooled = a;
    pooled.insert(pooled.end(), b.begin(), b.end());
    const std::size_t n = pooled.size();
    const std::size_t na = a.size();

    // U counts the pairs the first group wins, ties contributing one half
    auto u_of = [&](const std::vector<std::size_t>& group_a) {
        double u = 0.0;
        std::vector<bool> in_a(n, false);
        for (std::size_t i : group_a) in_a[i] = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (!in_a[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (in_a[j]) continue;
                if (pooled[i] > pooled[j]) u += 1.0;
                if (pooled[i] == pooled[j]) u += 0.5;
            }
        }
        return u;
    };

    std::vector<std::size_t> observed(na);
    for (std::size_t i = 0; i < na; ++i) observed[i] = i;
    const double u_obs = u_of(observed);

    std::vector<bool> mask(n, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(na), true);
    std::sort(mask.begin(), mask.end());
    double favorable = 0.0, total = 0.0;
    do {
        std::vector<std::size_t> group;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask[i]) group.push_back(i);
        }
        total += 1.0;
        if (u_of(group) <= u_obs + 1e-9) favorable += 1.0;
    } while (std::next_permutation(mask.begin(), mask.end()));
    return favorable / total;
}

// Sign-vector oracle for the exact one-sided Wilcoxon p-value.
double wilcoxon_oracle_p_greater(const std::vector<double>& diffs) {
    std::vector<double> abs_diffs;
    for (double d : diffs) {
        if (d != 0.0) abs_diffs.push_back(std::fabs(d));
    }
    const std::size_t m = abs_diffs.size();
    std::vector<double> sorted = abs_diffs;
    std::sort(sorted.begin(), sorted.end());
    auto rank_of = [&sorted](double v) {
        double sum = 0.0;
        int count = 0;
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (sorted[i] == v) {
                sum += static_cast<double>(i + 1);
                ++count;
            }
        }
        return sum / count;
    };

    double w_neg_obs = 0.0;
    std::vector<double> ranks;
    std::size_t k = 0;
    for (double d : diffs) {
        if (d == 0.0) continue;
        const double r = rank_of(std::fabs(d));
        ranks.push_back(r);
        if (d < 0.0) w_neg_obs += r;
        ++k;
    }

    double favorable = 0.0;
    const std::uint64_t combos = static_cast<std::uint64_t>(1) << m;
    for (std::uint64_t maskbits = 0; maskbits < combos; ++maskbits) {
        double w_neg = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (maskbits & (static_cast<std::uint64_t>(1) << i)) w_neg += ranks[i];
        }
        if (w_neg <= w_neg_obs + 1e-9) favorable += 1.0;
    }
    return favorable / static_cast<double>(combos);
}

}  // namespace

TEST_CASE("describe handles constant samples") {
    const SummaryStats s = describe({{5, 5, 5}, "const"});
    CHECK(s.sd == 0.0);
    CHECK(s.min == 5);
    CHECK(s.max == 5);
    CHECK(s.mean == 5);
}

TEST_CASE("describe uses Tukey hinges") {
    const SummaryStats s = describe({{5, 7, 11, 18, 31}, "odd"});
    CHECK(s.median == 11);
    CHECK(s.q1 == 6);
    CHECK(s.q3 == doctest::Approx(24.5));
    CHECK(s.mean == doctest::Approx(14.4));
    CHECK(s.n == 5);
}

TEST_CASE("describe ignores input order") {
    const SummaryStats a = describe({{31, 5, 18, 7, 11}, "p"});
    const SummaryStats b = describe({{5, 7, 11, 18, 31}, "q"});
    CHECK(a.median == b.median);
    CHECK(a.q1 == b.q1);
    CHECK(a.q3 == b.q3);
    CHECK(a.sd == b.sd);
}

TEST_CASE("describe rejects empty samples") {
    CHECK_THROWS_AS(describe({{}, "empty"}), std::invalid_argument);
}

TEST_CASE("mann-whitney separates {1,2} from {3,4} at exactly one sixth") {
    const TestResult r = mann_whitney({{1, 2}, "a"}, {{3, 4}, "b"}, Alternative::Less);
    CHECK(r.method == TestMethod::Exact);
    CHECK(r.statistic == 0.0);
    CHECK(r.p_value == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("mann-whitney on interleaved samples gives p = 7/20") {
    // C(6,3) = 20 labelings; rank sums at most 9 occur for {1,2,3}, {1,2,4},
    // {1,2,5}, {1,2,6}, {1,3,4}, {1,3,5} and {2,3,4}
    const TestResult r = mann_whitney({{1, 3, 5}, "a"}, {{2, 4, 6}, "b"}, Alternative::Less);
    CHECK(r.method == TestMethod::Exact);
    CHECK(r.statistic == doctest::Approx(3.0));
    CHECK(r.p_value == doctest::Approx(0.35).epsilon(1e-12));
}

TEST_CASE("identical samples give U = n^2/2 and two-sided p = 1") {
    const std::vector<double> v = {2, 2, 2, 2};
    const TestResult r = mann_whitney({v, "a"}, {v, "b"}, Alternative::TwoSided);
    CHECK(r.statistic == doctest::Approx(8.0));
    CHECK(r.p_value == doctest::Approx(1.0));
    CHECK(r.z == 0.0);
}

TEST_CASE("U_a plus U_b equals the product of the sample sizes") {
    Rng rng(73);
    std::uniform_int_distribution<int> value(0, 5);
    std::uniform_int_distribution<std::size_t> size(1, 7);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> a(size(rng)), b(size(rng));
        for (auto& v : a) v = value(rng);
        for (auto& v : b) v = value(rng);
        const double ua = mann_whitney({a, "a"}, {b, "b"}, Alternative::Less).statistic;
        const double ub = mann_whitney({b, "b"}, {a, "a"}, Alternative::Less).statistic;
        CHECK(ua + ub == doctest::Approx(static_cast<double>(a.size() * b.size())));
    }
}

TEST_CASE("exact mann-whitney matches the labeling oracle") {
    Rng rng(79);
    std::uniform_int_distribution<int> value(0, 8);
    std::uniform_int_distribution<std::size_t> size(1, 6);
    for (int i = 0; i < 60; ++i) {
        std::vector<double> a(size(rng)), b(size(rng));
        for (auto& v : a) v = value(rng);
        for (auto& v : b) v = value(rng);
        const TestResult r = mann_whitney({a, "a"}, {b, "b"}, Alternative::Less);
        REQUIRE(r.method == TestMethod::Exact);
        CHECK(r.p_value == doctest::Approx(mw_oracle_p_less(a, b)).epsilon(1e-9));
    }
}

TEST_CASE("large samples fall back to the tie-corrected normal approximation") {
    std::vector<double> a, b;
    for (int i = 0; i < 20; ++i) {
        a.push_back(i);
        b.push_back(i + 8);
    }
    const TestResult r = mann_whitney({a, "a"}, {b, "b"}, Alternative::Less);
    CHECK(r.method == TestMethod::NormalApproximation);
    CHECK(r.p_value < 0.05);
    CHECK(r.z < 0.0);
}

TEST_CASE("wilcoxon all-positive differences: exact p is 1/8") {
    const std::vector<std::pair<double, double>> pairs = {{2, 1}, {3, 1}, {4, 1}};
    const TestResult r = wilcoxon_signed_rank(pairs, Alternative::Greater);
    CHECK(r.method == TestMethod::Exact);
    CHECK(r.statistic == 0.0);  // W- = 0
    CHECK(r.p_value == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("wilcoxon with one negative difference: exact p is 0.25") {
    // differences +3, -1, +2
    const std::vector<std::pair<double, double>> pairs = {{4, 1}, {0, 1}, {3, 1}};
    const TestResult r = wilcoxon_signed_rank(pairs, Alternative::Greater);
    CHECK(r.statistic == doctest::Approx(1.0));
    CHECK(r.p_value == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("wilcoxon rejects all-zero differences") {
    const std::vector<std::pair<double, double>> pairs = {{1, 1}, {2, 2}};
    CHECK_THROWS_AS(wilcoxon_signed_rank(pairs, Alternative::Greater),
                    std::invalid_argument);
}

TEST_CASE("exact wilcoxon matches the sign-vector oracle") {
    Rng rng(83);
    std::uniform_int_distribution<int> value(-4, 5);
    std::uniform_int_distribution<std::size_t> size(1, 10);
    for (int i = 0; i < 60; ++i) {
        std::vector<std::pair<double, double>> pairs;
        std::vector<double> diffs;
        const std::size_t n = size(rng);
        bool any_nonzero = false;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = value(rng);
            pairs.emplace_back(d, 0.0);
            diffs.push_back(d);
            if (d != 0.0) any_nonzero = true;
        }
        if (!any_nonzero) continue;
        const TestResult r = wilcoxon_signed_rank(pairs, Alternative::Greater);
        REQUIRE(r.method == TestMethod::Exact);
        CHECK(r.p_value == doctest::Approx(wilcoxon_oracle_p_greater(diffs)).epsilon(1e-9));
    }
}

TEST_CASE("spearman is exactly plus or minus one on monotone data") {
    const Sample x{{1, 2, 3, 4, 5}, "x"};
    CHECK(spearman(x, {{10, 20, 30, 40, 50}, "up"}).rho == 1.0);
    CHECK(spearman(x, {{9, 7, 5, 3, 1}, "down"}).rho == -1.0);
}

TEST_CASE("the n=4 spearman fixture gives rho = 0.8") {
    const CorrelationResult r = spearman({{1, 2, 3, 4}, "x"}, {{1, 3, 2, 4}, "y"});
    CHECK(r.rho == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(r.method == TestMethod::Exact);
}

TEST_CASE("spearman is invariant under strictly monotone transformations") {
    const Sample x{{3, 1, 4, 1.5, 9, 2.6}, "x"};
    const Sample y{{2, 7, 1, 8, 2.8, 1.8}, "y"};
    Sample y_cubed = y;
    for (auto& v : y_cubed.values) v = v * v * v;
    CHECK(spearman(x, y).rho == doctest::Approx(spearman(x, y_cubed).rho).epsilon(1e-12));
}

TEST_CASE("spearman rejects degenerate inputs") {
    CHECK_THROWS_AS(spearman({{1, 2}, "x"}, {{1, 2, 3}, "y"}), std::invalid_argument);
    CHECK_THROWS_AS(spearman({{1, 2}, "x"}, {{1, 2}, "y"}), std::invalid_argument);
    CHECK_THROWS_AS(spearman({{1, 1, 1}, "x"}, {{1, 2, 3}, "y"}), std::invalid_argument);
}

TEST_CASE("spearman's t approximation kicks in beyond eight points") {
    std::vector<double> x, y;
    for (int i = 0; i < 12; ++i) {
        x.push_back(i);
        y.push_back(i + ((i % 3) - 1.0) * 0.2);
    }
    const CorrelationResult r = spearman({x, "x"}, {y, "y"}, Alternative::Greater);
    CHECK(r.method == TestMethod::NormalApproximation);
    CHECK(r.rho > 0.9);
    CHECK(r.p_value < 0.01);
}

TEST_CASE("misinterpretation rate endpoints and the worked tally") {
    CHECK(misinterpretation_rate({{10, 0, 0, 0}}) == doctest::Approx(1.0));
    for (std::size_t k = 2; k <= 6; ++k) {
        std::vector<std::int64_t> uniform(k, 6);
        CHECK(misinterpretation_rate({uniform}) == doctest::Approx(0.0));
    }
    CHECK(misinterpretation_rate({{6, 2, 1, 1}}) ==
          doctest::Approx(1.0 - 14.0 / 30.0).epsilon(1e-12));
}

TEST_CASE("misinterpretation rate is permutation invariant and bounded") {
    Rng rng(89);
    std::uniform_int_distribution<std::int64_t> count(0, 9);
    std::uniform_int_distribution<std::size_t> options(2, 6);
    for (int i = 0; i < 200; ++i) {
        std::vector<std::int64_t> counts(options(rng));
        std::int64_t total = 0;
        for (auto& c : counts) {
            c = count(rng);
            total += c;
        }
        if (total == 0) counts[0] = 1;
        const double value = misinterpretation_rate({counts});
        CHECK(value >= -1e-12);
        CHECK(value <= 1.0 + 1e-12);
        std::vector<std::int64_t> shuffled = counts;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(misinterpretation_rate({shuffled}) == doctest::Approx(value).epsilon(1e-12));
    }
}

TEST_CASE("misinterpretation rate hits its endpoints only at the extremes") {
    CHECK(misinterpretation_rate({{5, 1}}) != 1.0);
    CHECK(misinterpretation_rate({{5, 1}}) != 0.0);
    CHECK(misinterpretation_rate({{0, 7, 0}}) == 1.0);   // concentrated, any position
    CHECK(misinterpretation_rate({{3, 3, 3, 4}}) != 0.0);  // nearly uniform is not 0
}

TEST_CASE("misinterpretation rate rejects degenerate tallies") {
    CHECK_THROWS_AS(misinterpretation_rate({{5}}), std::invalid_argument);
    CHECK_THROWS_AS(misinterpretation_rate({{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(misinterpretation_rate({{3, -1}}), std::invalid_argument);
}
