#pragma once

#include <cstdint>
#include <string_view>

namespace symdom {

struct Interval {
    double lower = 0.0;
    double upper = 1.0;
};

/// Exact two-sided binomial interval for hits/trials at the given confidence.
Interval clopper_pearson(std::uint64_t hits, std::uint64_t trials, double confidence);

/// A probability, either exact or a Monte Carlo estimate with its interval.
struct TailEstimate {
    double value = 0.0;
    bool exact = true;
    double lower = 0.0;
    double upper = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t hits = 0;

    static TailEstimate exact_value(double p) noexcept {
        return TailEstimate{p, true, p, p, 0, 0};
    }
    static TailEstimate from_counts(std::uint64_t hits, std::uint64_t samples, double confidence);
};

/// Sample mean with its standard error.
struct MeanEstimate {
    double value = 0.0;
    double standard_error = 0.0;
    std::uint64_t samples = 0;
};

enum class Verdict { holds, inconclusive, violated };

std::string_view to_string(Verdict v) noexcept;

/// The more severe of two verdicts (violated > inconclusive > holds).
inline Verdict worst(Verdict a, Verdict b) noexcept { return a > b ? a : b; }

/// Exact comparisons accept rounding noise of this relative size.
inline constexpr double kExactRelativeTolerance = 1e-12;

inline bool exact_leq(double lhs, double rhs) noexcept {
    const double scale = rhs > 0 ? rhs : -rhs;
    return lhs <= rhs + kExactRelativeTolerance * scale + 1e-15;
}

/// Two-sided normal quantile z such that P(|Z| <= z) = confidence.
double normal_two_sided_quantile(double confidence);

}  // namespace symdom
