#pragma once

#include <span>
#include <string_view>

#include "decoy/common.hpp"

namespace decoy::stats {

enum class TestKind { shapiro_wilk, mann_whitney_u };
enum class Method { exact, normal_approximation };

std::string_view to_string(TestKind kind);
std::string_view to_string(Method method);

struct StatReport {
    TestKind test = TestKind::mann_whitney_u;
    double statistic = 0.0;
    double p_value = 1.0;
    double alpha = 0.05;
    bool reject_null = false;  ///< p_value < alpha
    Method method = Method::exact;
};

class SampleTooSmall : public Error {
public:
    using Error::Error;
};
class SampleTooLarge : public Error {
public:
    using Error::Error;
};
class DegenerateSample : public Error {
public:
    using Error::Error;
};
class EmptySample : public Error {
public:
    using Error::Error;
};

inline constexpr double kDefaultAlpha = 0.05;

/// Clamps p into [0, 1] and sets reject_null = p < alpha. Alpha must lie in (0, 1).
StatReport make_report(TestKind test, double statistic, double p_value, double alpha, Method method);

/// Shapiro-Wilk W and p-value (Royston 1995, AS R94). 3 <= n <= 5000.
/// The p-value is exact for n = 3 and a normalising approximation otherwise.
StatReport shapiro_wilk(std::span<const double> sample, double alpha = kDefaultAlpha);

/// Largest group size for which the exact null distribution is used.
inline constexpr std::size_t kExactMannWhitneyMax = 10;

/// Two-sided Mann-Whitney U; statistic = min(U_a, U_b), midranks for ties.
/// Exact when max(|a|, |b|) <= 10 and there are no ties, otherwise the normal
/// approximation with tie and continuity corrections.
/// `choice` forces a path; forcing exact on tied samples throws ConfigError.
enum class MethodChoice { automatic, exact, normal_approximation };
StatReport mann_whitney_u(std::span<const double> a, std::span<const double> b, double alpha = kDefaultAlpha,
                          MethodChoice choice = MethodChoice::automatic);

}  // namespace decoy::stats
