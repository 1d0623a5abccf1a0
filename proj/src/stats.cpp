#include "decoy/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <boost/math/distributions/normal.hpp>

namespace decoy::stats {

StatReport make_report(TestKind test, double statistic, double p_value, double alpha, Method method) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ConfigError("alpha must lie in (0, 1)");
    }
    p_value = std::clamp(p_value, 0.0, 1.0);
    return {test, statistic, p_value, alpha, p_value < alpha, method};
}

namespace {

double normal_quantile(double p) {
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double normal_upper_tail(double x, double mean = 0.0, double sd = 1.0) {
    return boost::math::cdf(boost::math::complement(boost::math::normal_distribution<double>(mean, sd), x));
}

/// c[0] + c[1] x + c[2] x^2 + ...
template <std::size_t N>
double poly(const double (&c)[N], double x) {
    double r = 0.0;
    for (std::size_t i = N; i-- > 0;) {
        r = r * x + c[i];
    }
    return r;
}

/// Royston's approximation to the expected-normal-order-statistic weights;
/// returns the upper half, a[0] for the largest observation.
std::vector<double> shapiro_weights(std::size_t n) {
    static constexpr double c1[] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
    static constexpr double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};

    const std::size_t half = n / 2;
    std::vector<double> a(half);
    if (n == 3) {
        a[0] = std::sqrt(0.5);
        return a;
    }
    const double an = static_cast<double>(n);
    std::vector<double> m(half);
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
        m[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));  // negative
        summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = poly(c1, rsn) - m[0] / ssumm2;

    std::size_t first_scaled;
    double fac;
    if (n > 5) {
        first_scaled = 2;
        const double a2 = -m[1] / ssumm2 + poly(c2, rsn);
        fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
        a[1] = a2;
    } else {
        first_scaled = 1;
        fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    }
    a[0] = a1;
    for (std::size_t i = first_scaled; i < half; ++i) {
        a[i] = -m[i] / fac;
    }
    return a;
}

/// Midranks (1-based) of `values` within the pooled sample; also the tie term sum(t^3 - t).
std::vector<double> midranks(std::span<const double> values, double& tie_term, bool& has_ties) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
    std::vector<double> ranks(n);
    tie_term = 0.0;
    has_ties = false;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i + 1;
        while (j < n && values[order[j]] == values[order[i]]) {
            ++j;
        }
        const double rank = 0.5 * static_cast<double>(i + 1 + j);  // average of ranks i+1 .. j
        for (std::size_t k = i; k < j; ++k) {
            ranks[order[k]] = rank;
        }
        const double t = static_cast<double>(j - i);
        if (t > 1) {
            has_ties = true;
            tie_term += t * t * t - t;
        }
        i = j;
    }
    return ranks;
}

/// Number of arrangements of m "a" and n "b" items with U_a = u, for u in [0, m n].
std::vector<double> u_frequencies(std::size_t m, std::size_t n) {
    // freq[i][j][u] built up with f(i, j, u) = f(i-1, j, u-j) + f(i, j-1, u).
    std::vector<std::vector<std::vector<double>>> f(m + 1, std::vector<std::vector<double>>(n + 1));
    for (std::size_t i = 0; i <= m; ++i) {
        for (std::size_t j = 0; j <= n; ++j) {
            auto& cell = f[i][j];
            cell.assign(i * j + 1, 0.0);
            if (i == 0 || j == 0) {
                cell[0] = 1.0;
                continue;
            }
            // Largest item is an "a" (beats all j b's) or a "b" (beats nothing).
            const auto& without_a = f[i - 1][j];
            const auto& without_b = f[i][j - 1];
            for (std::size_t u = 0; u < without_b.size(); ++u) {
                cell[u] += without_b[u];
            }
            for (std::size_t u = 0; u < without_a.size(); ++u) {
                cell[u + j] += without_a[u];
            }
        }
    }
    return f[m][n];
}

}  // namespace

std::string_view to_string(TestKind kind) {
    return kind == TestKind::shapiro_wilk ? "shapiro_wilk" : "mann_whitney_u";
}

std::string_view to_string(Method method) {
    return method == Method::exact ? "exact" : "normal_approximation";
}

StatReport shapiro_wilk(std::span<const double> sample, double alpha) {
    static constexpr double g[] = {-2.273, 0.459};
    static constexpr double c3[] = {0.544, -0.39978, 0.025054, -6.714e-4};
    static constexpr double c4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
    static constexpr double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
    static constexpr double c6[] = {-0.4803, -0.082676, 0.0030302};

    const std::size_t n = sample.size();
    if (n < 3) {
        throw SampleTooSmall("Shapiro-Wilk needs at least 3 observations, got " + std::to_string(n));
    }
    if (n > 5000) {
        throw SampleTooLarge("Shapiro-Wilk supports at most 5000 observations, got " + std::to_string(n));
    }
    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    const double range = x.back() - x.front();
    if (!(range > 0.0)) {
        throw DegenerateSample("Shapiro-Wilk sample has zero variance");
    }

    // Centre and scale by the range before forming sums of squares.
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    for (double& v : x) {
        v = (v - mean) / range;
    }
    const std::vector<double> a = shapiro_weights(n);
    double sax = 0.0;
    double ssa = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sax += a[i] * (x[n - 1 - i] - x[i]);
        ssa += 2.0 * a[i] * a[i];
    }
    double ssx = 0.0;
    for (double v : x) {
        ssx += v * v;
    }
    const double w1 = 1.0 - (sax * sax) / (ssa * ssx);  // 1 - W, kept separate for precision
    const double w = 1.0 - w1;

    if (n == 3) {
        constexpr double six_over_pi = 1.90985931710274;
        constexpr double pi_over_three = 1.04719755119660;
        const double p = std::max(0.0, six_over_pi * (std::asin(std::sqrt(w)) - pi_over_three));
        return make_report(TestKind::shapiro_wilk, w, p, alpha, Method::exact);
    }

    const double an = static_cast<double>(n);
    double y = std::log(w1);
    double mu;
    double sigma;
    if (n <= 11) {
        const double gamma = poly(g, an);
        if (y >= gamma) {
            return make_report(TestKind::shapiro_wilk, w, 1e-99, alpha, Method::normal_approximation);
        }
        y = -std::log(gamma - y);
        mu = poly(c3, an);
        sigma = std::exp(poly(c4, an));
    } else {
        const double ln_n = std::log(an);
        mu = poly(c5, ln_n);
        sigma = std::exp(poly(c6, ln_n));
    }
    return make_report(TestKind::shapiro_wilk, w, normal_upper_tail(y, mu, sigma), alpha, Method::normal_approximation);
}

StatReport mann_whitney_u(std::span<const double> a, std::span<const double> b, double alpha, MethodChoice choice) {
    if (a.empty() || b.empty()) {
        throw EmptySample("Mann-Whitney U needs at least one observation per sample");
    }
    const std::size_t m = a.size();
    const std::size_t n = b.size();
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    double tie_term = 0.0;
    bool has_ties = false;
    const std::vector<double> ranks = midranks(pooled, tie_term, has_ties);

    const double rank_sum_a = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(m), 0.0);
    const double mn = static_cast<double>(m) * static_cast<double>(n);
    const double u_a = rank_sum_a - static_cast<double>(m) * static_cast<double>(m + 1) / 2.0;
    const double u = std::min(u_a, mn - u_a);

    if (choice == MethodChoice::exact && has_ties) {
        throw ConfigError("exact Mann-Whitney needs tie-free samples");
    }
    const bool exact = choice == MethodChoice::exact ||
                       (choice == MethodChoice::automatic && !has_ties && std::max(m, n) <= kExactMannWhitneyMax);
    if (exact) {
        const std::vector<double> freq = u_frequencies(m, n);
        const double total = std::accumulate(freq.begin(), freq.end(), 0.0);
        const auto upto = static_cast<std::size_t>(std::llround(u));
        double tail = 0.0;
        for (std::size_t k = 0; k <= upto; ++k) {
            tail += freq[k];
        }
        return make_report(TestKind::mann_whitney_u, u, std::min(1.0, 2.0 * tail / total), alpha, Method::exact);
    }

    const double big_n = static_cast<double>(m + n);
    const double variance = mn / 12.0 * ((big_n + 1.0) - tie_term / (big_n * (big_n - 1.0)));
    if (!(variance > 0.0)) {
        // Every observation identical: no evidence either way.
        return make_report(TestKind::mann_whitney_u, u, 1.0, alpha, Method::normal_approximation);
    }
    const double z = (mn / 2.0 - u - 0.5) / std::sqrt(variance);
    return make_report(TestKind::mann_whitney_u, u, 2.0 * normal_upper_tail(z), alpha, Method::normal_approximation);
}

}  // namespace decoy::stats
