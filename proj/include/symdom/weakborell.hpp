#pragma once

// Weak Borell inequality WB(C, delta, theta):
//   P(||X|| > lambda) <= C lambda^-delta P(||X|| > 1)  for lambda >= 1,
// for every norm with P(||X|| > 1) < theta.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "symdom/distributions.hpp"
#include "symdom/estimation.hpp"
#include "symdom/geometry.hpp"
#include "symdom/stats.hpp"

namespace symdom {

struct WBParams {
    double C = 1.0;
    double delta = 1.0;
    double theta = 0.5;

    void validate() const;
};

/// (12 9^delta C, delta, min{theta/2, 1/(96 C 9^delta)}).
WBParams wb_tensorize_constants(const WBParams& params);

inline const std::vector<double>& default_lambda_grid() {
    static const std::vector<double> grid{1.0, 2.0, 3.0, 5.0, 9.0, 27.0, 81.0};
    return grid;
}

struct WBRecord {
    std::string norm_id;
    double lambda = 1.0;
    TailEstimate p1;       // P(||X|| > 1)
    TailEstimate plambda;  // P(||X|| > lambda)
    double bound = 0.0;    // C lambda^-delta p1
    Verdict verdict = Verdict::holds;
};

struct WBSkipped {
    std::string norm_id;
    TailEstimate p1;
    std::string reason;
};

struct WBReport {
    std::string label;
    WBParams params;
    TailMethod method = TailMethod::enumeration;
    std::uint64_t samples = 0;  // final Monte Carlo budget, 0 if exact
    std::vector<WBRecord> records;
    std::vector<WBSkipped> skipped;
    Verdict verdict = Verdict::holds;
    std::vector<WBReport> stages;

    std::size_t count(Verdict v) const noexcept;
};

struct WBOptions {
    Estimator estimator{};
    /// When > estimator.samples, inconclusive Monte Carlo runs are repeated
    /// with ten times the budget up to this many samples (at most 1e8).
    std::uint64_t escalation_cap = 0;
};

inline constexpr std::uint64_t kMaxEscalatedSamples = 100'000'000;

/// Norms with P(||X|| > 1) >= theta (for Monte Carlo: whose upper bound is not
/// below theta) are listed as skipped. Exact cells use exact_leq; otherwise
/// violated iff plambda.lower > C lambda^-delta p1.upper.
WBReport check_wb(const ProductLaw& law, const WBParams& params, const std::vector<Norm>& norms,
                  const std::vector<double>& lambda_grid, const WBOptions& options, StreamKey key);

struct RecursionRow {
    int k = 0;
    double recursive = 0.0;    // p_k <= 6 C 3^{-delta(k-1)} p0 + 4 p_{k-1}^2, p_0 = p0
    double closed_form = 0.0;  // 12 3^delta C 3^{-k delta} p0
    double multiplier = 0.0;   // 1/2 + 48 C 3^{-delta k + 3 delta} p0
    bool holds = true;         // recursive <= closed_form (1e-12 relative)
};

struct RecursionTable {
    double p0 = 0.0;
    WBParams params;
    WBParams tensorized;
    double threshold = 0.0;  // 1/(96 C 9^delta): below it every row must hold
    bool asserted = false;   // p0 <= threshold
    bool gate = false;       // p0 < min{1/3, theta'}
    std::vector<RecursionRow> rows;

    bool all_hold() const noexcept;
};

RecursionTable recursion_bound(double p0, const WBParams& params, int K);

/// Certifies every component against params (a violation throws
/// PreconditionError naming the component), then checks the sum against
/// wb_tensorize_constants(params).
WBReport wb_sum_experiment(const std::vector<Source>& components, const WBParams& params,
                           const std::vector<Norm>& norms, const std::vector<double>& lambda_grid,
                           const WBOptions& options, StreamKey key);

nlohmann::json to_json(const WBParams& p);
nlohmann::json to_json(const WBReport& r);
nlohmann::json to_json(const RecursionTable& t);
/// norm_id, lambda, ratio = plambda/p1, bound_factor = C lambda^-delta, verdict
std::string wb_csv(const WBReport& r);
std::string recursion_csv(const RecursionTable& t);

}  // namespace symdom
