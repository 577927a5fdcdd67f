#pragma once

// Majorisation of weight sequences, decomposition of a < b into a mixture of
// permutations of b, and the weighted-sum domination experiments.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "symdom/dominance.hpp"
#include "symdom/inequalities.hpp"
#include "symdom/weakborell.hpp"

namespace symdom {

inline constexpr double kMajorisationTolerance = 1e-9;

/// a is not majorised by b; index() is the first failing partial sum (0-based,
/// n-1 for a total-sum mismatch).
class NotMajorisedError : public PreconditionError {
public:
    NotMajorisedError(const std::string& what, std::size_t index) : PreconditionError(what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// First k whose partial sum of decreasing rearrangements breaks a < b, or nullopt.
std::optional<std::size_t> majorisation_violation(const std::vector<double>& a, const std::vector<double>& b,
                                                  double tol = kMajorisationTolerance);

bool is_majorised(const std::vector<double>& a, const std::vector<double>& b, double tol = kMajorisationTolerance);

/// Throws NotMajorisedError unless a < b.
void require_majorised(const std::vector<double>& a, const std::vector<double>& b,
                       double tol = kMajorisationTolerance);

struct PermutationTerm {
    std::vector<std::size_t> permutation;  // (P b)_i = b[permutation[i]]
    double weight = 0.0;
};

struct PermutationMixture {
    std::size_t n = 0;
    std::vector<PermutationTerm> terms;

    std::vector<double> reconstruct(const std::vector<double>& b) const;
    double total_weight() const noexcept;
};

/// One T-transform c' = t c + (1 - t) c o (j k) applied along the chain.
struct TTransform {
    std::size_t j = 0;
    std::size_t k = 0;
    double t = 1.0;
};

struct Decomposition {
    std::vector<TTransform> chain;         // on the decreasing rearrangements
    std::vector<std::vector<double>> steps;  // rearranged b after each transform
    std::vector<std::vector<double>> matrix;  // doubly stochastic D with a = D b (original order)
    PermutationMixture mixture;
    double residual = 0.0;  // max entry left after Birkhoff extraction
};

/// T-transform chain from b* down to a*, then greedy Birkhoff extraction using
/// the lexicographically smallest perfect matching at each step.
Decomposition decompose_detailed(const std::vector<double>& a, const std::vector<double>& b);
PermutationMixture decompose(const std::vector<double>& a, const std::vector<double>& b);

nlohmann::json to_json(const PermutationMixture& m);

/// E f(||sum a_i X_i||) <= E f(||sum b_i X_i||) for iid X_i ~ source.
SlackReport schur_convexity_check(const std::vector<double>& a, const std::vector<double>& b, const Source& source,
                                  const Norm& norm, SignTransform transform = SignTransform::shifted_plus(1.0),
                                  const Estimator& estimator = {}, StreamKey key = {});

struct WeightedDominationResult {
    double kappa = 0.0;           // the value used
    double kappa_expanded = 0.0;  // max{2/theta, 96 C 9^delta, 12 C 9^delta / (delta - 1)}
    double kappa_compact = 0.0;   // max{1/theta', C'/(delta - 1)}
    double lambda = 2.0;
    bool exploratory = false;     // delta == 1: the infinite term is dropped, no pass/fail
    WBReport certification;       // the source against WB(C, delta, theta)
    DominationReport report;
};

/// Checks sum a_i X_i against sum b_i X_i at (kappa, 2). delta <= 1 is rejected
/// unless delta == 1 and exploratory is set.
WeightedDominationResult weighted_domination_experiment(const std::vector<double>& a, const std::vector<double>& b,
                                                        const Source& source, const WBParams& params,
                                                        const std::vector<Norm>& norms, const Estimator& estimator,
                                                        StreamKey key, bool exploratory = false);

/// max{2/theta, 96 C 9^delta, 12 C 9^delta / (delta - 1)} for delta > 1.
double weighted_domination_kappa(const WBParams& params);

struct CounterexampleRow {
    std::uint64_t n = 1;
    double threshold = 0.0;  // n^{1/delta - 1} / lambda
    TailEstimate lhs;        // P(|X_1| > 1)
    TailEstimate tail;       // P(|X_1| > threshold)
    double rhs = 0.0;        // kappa * tail
    double ratio = 0.0;      // lhs / rhs
    bool witness = false;    // lhs > rhs (Monte Carlo: lhs.lower > kappa tail.upper); never at n = 1
};

struct CounterexampleTable {
    double delta = 0.5;
    double kappa = 1.0;
    double lambda = 1.0;
    TailMethod method = TailMethod::closed_form;
    std::vector<CounterexampleRow> rows;
    std::optional<std::uint64_t> witness;  // smallest n with a witnessed failure
};

/// For X_i iid symmetric delta-stable, sum_{i<=n} n^{-1} X_i has the law of
/// n^{1/delta - 1} X_1, so domination of the average by X_1 with fixed
/// (kappa, lambda) fails for large n when delta < 1. Scaling the norm by
/// n^{1/delta - 1} turns the failure into lhs > rhs below.
CounterexampleTable counterexample_experiment(double delta, const std::vector<std::uint64_t>& n_grid, double kappa,
                                              double lambda, const Estimator& estimator = {}, StreamKey key = {});

nlohmann::json to_json(const CounterexampleTable& t);
std::string counterexample_csv(const CounterexampleTable& t);

}  // namespace symdom
