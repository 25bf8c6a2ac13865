#include "dmc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dmc {

namespace {

constexpr double kEps = 1e-9;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Regularized incomplete beta via the Lentz continued fraction.
double betacf(double a, double b, double x) {
    const double tiny = 1e-300;
    const int max_iter = 300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 3e-12) break;
    }
    return h;
}

double ibeta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_beta =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
        b * std::log(1.0 - x);
    const double front = std::exp(ln_beta);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betacf(a, b, x) / a;
    }
    return 1.0 - std::exp(std::lgamma(a + b) - std::lgamma(b) - std::lgamma(a) +
                          b * std::log(1.0 - x) + a * std::log(x)) *
                     betacf(b, a, 1.0 - x) / b;
}

double student_t_sf(double t, double df) {  // P(T > t)
    const double x = df / (df + t * t);
    const double p = 0.5 * ibeta(df / 2.0, 0.5, x);
    return t >= 0.0 ? p : 1.0 - p;
}

std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[idx[j + 1]] == values[idx[i]]) ++j;
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

double tie_correction_term(const std::vector<double>& values) {
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        sum += t * t * t - t;
        i = j + 1;
    }
    return sum;
}

double median_of(const std::vector<double>& sorted, std::size_t lo, std::size_t hi) {
    const std::size_t len = hi - lo;
    if (len == 0) return 0.0;
    if (len % 2 == 1) return sorted[lo + len / 2];
    return (sorted[lo + len / 2 - 1] + sorted[lo + len / 2]) / 2.0;
}

double two_sided(double p_low, double p_high) {
    return std::min(1.0, 2.0 * std::min(p_low, p_high));
}

// All C(n, k) rank subsets, counting how many produce a rank sum at most /
// at least the observed one.
void enumerate_rank_subsets(const std::vector<double>& ranks, std::size_t next, std::size_t left,
                            double sum, double target, double& count_le, double& count_ge,
                            double& total) {
    if (left == 0) {
        total += 1.0;
        if (sum <= target + kEps) count_le += 1.0;
        if (sum >= target - kEps) count_ge += 1.0;
        return;
    }
    if (ranks.size() - next < left) return;
    enumerate_rank_subsets(ranks, next + 1, left - 1, sum + ranks[next], target, count_le,
                           count_ge, total);
    enumerate_rank_subsets(ranks, next + 1, left, sum, target, count_le, count_ge, total);
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cov += (x[i] - mx) * (y[i] - my);
        vx += (x[i] - mx) * (x[i] - mx);
        vy += (y[i] - my) * (y[i] - my);
    }
    if (vx == 0.0 || vy == 0.0) {
        throw std::invalid_argument("zero rank variance");
    }
    return cov / std::sqrt(vx * vy);
}

}  // namespace

std::string to_string(Alternative a) {
    switch (a) {
        case Alternative::Less: return "less";
        case Alternative::Greater: return "greater";
        case Alternative::TwoSided: return "two-sided";
    }
    return "two-sided";
}

std::string to_string(TestMethod m) {
    return m == TestMethod::Exact ? "exact" : "normal-approximation";
}

SummaryStats describe(const Sample& s) {
    if (s.values.empty()) throw std::invalid_argument("empty sample");
    std::vector<double> v = s.values;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();

    SummaryStats out;
    out.n = n;
    out.min = v.front();
    out.max = v.back();
    out.median = median_of(v, 0, n);
    // Tukey hinges: medians of the halves, overall median excluded for odd n
    const std::size_t half = n / 2;
    out.q1 = n == 1 ? v[0] : median_of(v, 0, half);
    out.q3 = n == 1 ? v[0] : median_of(v, n - half, n);
    out.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - out.mean) * (x - out.mean);
        out.sd = std::sqrt(ss / static_cast<double>(n - 1));
    }
    return out;
}

TestResult mann_whitney(const Sample& a, const Sample& b, Alternative alternative) {
    if (a.values.empty() || b.values.empty()) throw std::invalid_argument("empty sample");
    const std::size_t na = a.values.size();
    const std::size_t nb = b.values.size();

    std::vector<double> pooled = a.values;
    pooled.insert(pooled.end(), b.values.begin(), b.values.end());
    const std::vector<double> ranks = average_ranks(pooled);

    double rank_sum_a = 0.0;
    for (std::size_t i = 0; i < na; ++i) rank_sum_a += ranks[i];
    const double u_a =
        rank_sum_a - static_cast<double>(na) * static_cast<double>(na + 1) / 2.0;

    TestResult result;
    result.statistic = u_a;
    result.alternative = alternative;

    if (na <= 8 && nb <= 8) {
        result.method = TestMethod::Exact;
        double count_le = 0.0, count_ge = 0.0, total = 0.0;
        enumerate_rank_subsets(ranks, 0, na, 0.0, rank_sum_a, count_le, count_ge, total);
        const double p_le = count_le / total;  // small U  <=>  small rank sum
        const double p_ge = count_ge / total;
        switch (alternative) {
            case Alternative::Less: result.p_value = p_le; break;
            case Alternative::Greater: result.p_value = p_ge; break;
            case Alternative::TwoSided: result.p_value = two_sided(p_le, p_ge); break;
        }
        return result;
    }

    result.method = TestMethod::NormalApproximation;
    const double n_total = static_cast<double>(na + nb);
    const double mean = static_cast<double>(na) * static_cast<double>(nb) / 2.0;
    const double tie_term = tie_correction_term(pooled);
    const double var = static_cast<double>(na) * static_cast<double>(nb) / 12.0 *
                       ((n_total + 1.0) - tie_term / (n_total * (n_total - 1.0)));
    if (var <= 0.0) {
        result.z = 0.0;
        result.p_value = 1.0;
        return result;
    }
    const double sd = std::sqrt(var);
    const double z_low = (u_a - mean + 0.5) / sd;
    const double z_high = (u_a - mean - 0.5) / sd;
    switch (alternative) {
        case Alternative::Less:
            result.z = z_low;
            result.p_value = normal_cdf(z_low);
            break;
        case Alternative::Greater:
            result.z = z_high;
            result.p_value = 1.0 - normal_cdf(z_high);
            break;
        case Alternative::TwoSided: {
            const double p = two_sided(normal_cdf(z_low), 1.0 - normal_cdf(z_high));
            result.z = (u_a - mean) / sd;
            result.p_value = p;
            break;
        }
    }
    return result;
}

TestResult wilcoxon_signed_rank(const std::vector<std::pair<double, double>>& pairs,
                                Alternative alternative) {
    std::vector<double> diffs;
    for (const auto& [x, y] : pairs) {
        const double d = x - y;
        if (d != 0.0) diffs.push_back(d);
    }
    if (diffs.empty()) throw std::invalid_argument("no nonzero differences");

    std::vector<double> abs_diffs(diffs.size());
    std::transform(diffs.begin(), diffs.end(), abs_diffs.begin(),
                   [](double d) { return std::fabs(d); });
    const std::vector<double> ranks = average_ranks(abs_diffs);

    double w_pos = 0.0, w_neg = 0.0;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        (diffs[i] > 0.0 ? w_pos : w_neg) += ranks[i];
    }
    const std::size_t m = diffs.size();

    TestResult result;
    result.statistic = std::min(w_pos, w_neg);
    result.alternative = alternative;

    if (m <= 12) {
        result.method = TestMethod::Exact;
        const std::uint64_t combos = static_cast<std::uint64_t>(1) << m;
        double count_neg_le = 0.0, count_pos_le = 0.0;
        for (std::uint64_t mask = 0; mask < combos; ++mask) {
            double neg = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                if (mask & (static_cast<std::uint64_t>(1) << i)) neg += ranks[i];
            }
            const double pos = (w_pos + w_neg) - neg;
            if (neg <= w_neg + kEps) count_neg_le += 1.0;
            if (pos <= w_pos + kEps) count_pos_le += 1.0;
        }
        const double p_greater = count_neg_le / static_cast<double>(combos);
        const double p_less = count_pos_le / static_cast<double>(combos);
        switch (alternative) {
            case Alternative::Greater: result.p_value = p_greater; break;
            case Alternative::Less: result.p_value = p_less; break;
            case Alternative::TwoSided: result.p_value = two_sided(p_less, p_greater); break;
        }
        return result;
    }

    result.method = TestMethod::NormalApproximation;
    const double md = static_cast<double>(m);
    const double mean = md * (md + 1.0) / 4.0;
    const double var = md * (md + 1.0) * (2.0 * md + 1.0) / 24.0 -
                       tie_correction_term(abs_diffs) / 48.0;
    const double sd = std::sqrt(var);
    auto one_sided = [&](double w) {
        const double z = (w - mean + 0.5) / sd;
        return std::make_pair(z, normal_cdf(z));
    };
    switch (alternative) {
        case Alternative::Greater: {
            auto [z, p] = one_sided(w_neg);
            result.z = z;
            result.p_value = p;
            break;
        }
        case Alternative::Less: {
            auto [z, p] = one_sided(w_pos);
            result.z = z;
            result.p_value = p;
            break;
        }
        case Alternative::TwoSided: {
            auto [z, p] = one_sided(std::min(w_pos, w_neg));
            result.z = z;
            result.p_value = std::min(1.0, 2.0 * p);
            break;
        }
    }
    return result;
}

CorrelationResult spearman(const Sample& x, const Sample& y, Alternative alternative) {
    if (x.values.size() != y.values.size()) {
        throw std::invalid_argument("samples must have equal length");
    }
    const std::size_t n = x.values.size();
    if (n < 3) throw std::invalid_argument("spearman requires at least 3 pairs");

    const std::vector<double> rx = average_ranks(x.values);
    const std::vector<double> ry = average_ranks(y.values);
    const double rho = pearson(rx, ry);

    CorrelationResult result;
    result.rho = rho;
    result.alternative = alternative;

    const double df = static_cast<double>(n - 2);
    if (std::fabs(rho) >= 1.0 - 1e-15) {
        result.t = rho > 0 ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();
    } else {
        result.t = rho * std::sqrt(df / (1.0 - rho * rho));
    }

    if (n <= 8) {
        result.method = TestMethod::Exact;
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        double count_ge = 0.0, count_le = 0.0, count_abs = 0.0, total = 0.0;
        std::vector<double> permuted(n);
        do {
            for (std::size_t i = 0; i < n; ++i) permuted[i] = ry[perm[i]];
            const double r = pearson(rx, permuted);
            total += 1.0;
            if (r >= rho - kEps) count_ge += 1.0;
            if (r <= rho + kEps) count_le += 1.0;
            if (std::fabs(r) >= std::fabs(rho) - kEps) count_abs += 1.0;
        } while (std::next_permutation(perm.begin(), perm.end()));
        switch (alternative) {
            case Alternative::Greater: result.p_value = count_ge / total; break;
            case Alternative::Less: result.p_value = count_le / total; break;
            case Alternative::TwoSided: result.p_value = count_abs / total; break;
        }
        return result;
    }

    result.method = TestMethod::NormalApproximation;
    const double sf = student_t_sf(result.t, df);  // P(T > t)
    switch (alternative) {
        case Alternative::Greater: result.p_value = sf; break;
        case Alternative::Less: result.p_value = 1.0 - sf; break;
        case Alternative::TwoSided:
            result.p_value = std::min(1.0, 2.0 * std::min(sf, 1.0 - sf));
            break;
    }
    return result;
}

double misinterpretation_rate(const AnswerTally& tally) {
    const std::size_t k = tally.counts.size();
    if (k < 2) throw std::invalid_argument("at least two answer options required");
    std::int64_t n = 0;
    for (std::int64_t c : tally.counts) {
        if (c < 0) throw std::invalid_argument("negative answer count");
        n += c;
    }
    if (n < 1) throw std::invalid_argument("at least one answer required");

    std::vector<std::int64_t> sorted = tally.counts;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double weighted = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        weighted += static_cast<double>(sorted[i]) * static_cast<double>(i);
    }
    return 1.0 - 2.0 * weighted /
                     (static_cast<double>(n) * static_cast<double>(k - 1));
}

}  // namespace dmc
