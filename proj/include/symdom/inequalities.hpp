#pragma once

// Exact and Monte Carlo checks of the classical Rademacher-sum and
// independent-sum inequalities. Exact checks enumerate sign patterns with the
// first sign fixed to +1: the integrands only depend on ||sum eps_i v_i||,
// which is invariant under eps -> -eps.

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "symdom/distributions.hpp"
#include "symdom/estimation.hpp"
#include "symdom/geometry.hpp"
#include "symdom/parallel.hpp"
#include "symdom/rng.hpp"
#include "symdom/stats.hpp"

namespace symdom {

/// Largest n for which sign patterns are enumerated (2^21 patterns after the symmetry halving).
inline constexpr std::size_t kSignEnumerationCap = 22;

struct SignInstance {
    std::vector<Vector> vectors;
    Norm norm;

    std::size_t size() const noexcept { return vectors.size(); }
    void validate() const;
};

enum class SlackMethod { exact, monte_carlo };

/// One inequality instance, oriented so that it holds iff lhs <= rhs.
struct SlackReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // rhs - lhs
    bool holds = true;
    Verdict verdict = Verdict::holds;
    SlackMethod method = SlackMethod::exact;
    std::uint64_t samples = 0;
    double confidence = 0.0;
    Interval lhs_interval{};
    Interval rhs_interval{};
    bool skipped = false;
    std::string note;

    static SlackReport exact(std::string name, double lhs, double rhs);
    /// Violated only when the lhs interval lies entirely above the rhs interval.
    static SlackReport monte_carlo(std::string name, double lhs, Interval lhs_ci, double rhs,
                                   Interval rhs_ci, std::uint64_t samples, double confidence);
    static SlackReport skip(std::string name, std::string why);
};

nlohmann::json to_json(const SlackReport& r);

/// Budget for the Monte Carlo fallback used when n exceeds the enumeration cap.
struct SignMonteCarlo {
    std::uint64_t samples = 1'000'000;
    double confidence = 0.99;
    StreamKey key{};
};

struct SignTransform {
    enum class Kind { identity, shifted_plus, square };
    Kind kind = Kind::identity;
    double shift = 0.0;

    static SignTransform identity() { return {Kind::identity, 0.0}; }
    static SignTransform shifted_plus(double a) { return {Kind::shifted_plus, a}; }
    static SignTransform square() { return {Kind::square, 0.0}; }

    double operator()(double u) const noexcept {
        switch (kind) {
            case Kind::identity: return u;
            case Kind::shifted_plus: return u > shift ? u - shift : 0.0;
            case Kind::square: return u * u;
        }
        return u;
    }
};

namespace detail {

inline constexpr std::uint64_t kSignBlock = std::uint64_t{1} << 10;

void check_sign_cap(std::size_t n);

/// Sum over the 2^(n-1) sign patterns (first sign +1) of f(||sum eps_i v_i||),
/// where f returns std::array<double, K>. Blocks of patterns are reduced in
/// block order, so the result does not depend on the worker count.
template <std::size_t K, class F>
std::array<double, K> sign_pattern_sums(std::span<const Vector> v, const Norm& norm, F&& f) {
    const std::size_t n = v.size();
    const std::size_t dim = norm.dimension();
    check_sign_cap(n);
    const std::uint64_t patterns = std::uint64_t{1} << (n - 1);
    const std::uint64_t blocks = (patterns + kSignBlock - 1) / kSignBlock;
    std::vector<std::array<double, K>> partial(blocks);

    auto run_block = [&](std::uint64_t block) {
        const std::uint64_t begin = block * kSignBlock;
        const std::uint64_t end = std::min(patterns, begin + kSignBlock);
        std::array<double, K> acc{};
        double s[kMaxDimension];
        std::uint64_t gray = begin ^ (begin >> 1);
        for (std::size_t k = 0; k < dim; ++k) {
            double x = v[0][k];
            for (std::size_t j = 1; j < n; ++j)
                x += ((gray >> (j - 1)) & 1u) ? -v[j][k] : v[j][k];
            s[k] = x;
        }
        for (std::uint64_t g = begin; g < end; ++g) {
            const auto values = f(norm.evaluate(s));
            for (std::size_t q = 0; q < K; ++q) acc[q] += values[q];
            if (g + 1 == end) break;
            const unsigned bit = static_cast<unsigned>(std::countr_zero(g + 1));
            gray ^= std::uint64_t{1} << bit;
            const double sign = ((gray >> bit) & 1u) ? -2.0 : 2.0;
            const Vector& w = v[bit + 1];
            for (std::size_t k = 0; k < dim; ++k) s[k] += sign * w[k];
        }
        partial[block] = acc;
    };

    if (blocks >= 64 && parallel::threads() > 1)
        parallel::for_each_index(blocks, run_block);
    else
        for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);

    std::array<double, K> total{};
    for (const auto& p : partial)
        for (std::size_t q = 0; q < K; ++q) total[q] += p[q];
    return total;
}

/// ||sum eps_i v_i|| for `samples` independent uniform sign patterns.
std::vector<double> sample_sign_norms(std::span<const Vector> v, const Norm& norm,
                                      const SignMonteCarlo& mc);

}  // namespace detail

/// Number of patterns enumerated for n vectors.
inline double sign_pattern_count(std::size_t n) {
    return static_cast<double>(std::uint64_t{1} << (n - 1));
}

/// P(||sum eps_i v_i|| > t), exact (a dyadic rational).
double sign_tail_exact(const SignInstance& inst, double t);

/// E transform(||sum eps_i v_i||), exact.
double sign_mean_exact(const SignInstance& inst, SignTransform transform);

/// P(||S|| > s+t) <= 4 P(||S|| > s) P(||S|| > t).
SlackReport verify_kahane(const SignInstance& inst, double s, double t, const SignMonteCarlo& mc = {});

/// E||S||^2 <= 2 (E||S||)^2.
SlackReport verify_l1_l2(const SignInstance& inst, const SignMonteCarlo& mc = {});

/// (1-theta)^2 / 2 <= P(||S|| > theta E||S||).
SlackReport verify_paley_zygmund(const SignInstance& inst, double theta, const SignMonteCarlo& mc = {});

/// E||sum eps_i a_i v_i|| <= E||sum eps_i b_i v_i|| when |a_i| <= |b_i|.
SlackReport verify_contraction(const std::vector<Vector>& v, const std::vector<double>& a,
                               const std::vector<double>& b, const Norm& norm,
                               const SignMonteCarlo& mc = {});

struct SumLevels {
    double s = 1.0;
    double t = 1.0;
    double u = 1.0;
};

/// Levy, maximal-summand, Hoffmann-Jorgensen and summand-tail inequalities
/// for X_1..X_n, checked in one pass over outcomes or samples.
struct SumInequalityReports {
    SlackReport levy;                // P(S_n^* > t) <= 2 P(||S_n|| > t)
    SlackReport max_summand;         // P(X_n^* > t) <= 2 P(||S_n|| > t)
    SlackReport hoffmann_jorgensen;  // P(S_n^* > s+t+u) <= P(X_n^* > s) + 2 P(S_n^* > t) P(||S_n|| > u)
    SlackReport summand_tails;       // sum_j P(||X_j|| > t) <= q / (1 - q), q = P(X_n^* > t) < 1

    std::vector<SlackReport> all() const { return {levy, max_summand, hoffmann_jorgensen, summand_tails}; }
};

SumInequalityReports verify_sum_inequalities(const ProductLaw& law, const Norm& norm, SumLevels levels,
                                             const Estimator& estimator = {}, StreamKey key = {});

}  // namespace symdom
