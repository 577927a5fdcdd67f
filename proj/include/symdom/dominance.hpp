#pragma once

// (kappa, lambda)-domination of symmetric random vectors, the Rademacher
// proxy E min{E_eps(||sum eps_i X_i|| - 1)_+, 1}, and the experiments that
// tensorise domination over independent sums.
//
// Domination quantifies over all symmetric convex bodies; every check here is
// relative to the finite norm family supplied by the caller.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "symdom/distributions.hpp"
#include "symdom/estimation.hpp"
#include "symdom/geometry.hpp"
#include "symdom/inequalities.hpp"
#include "symdom/stats.hpp"

namespace symdom {

struct DominationQuery {
    ProductLaw x;  // the vector is the sum of the components
    ProductLaw y;
    double kappa = 1.0;
    double lambda = 1.0;
    std::vector<Norm> norms;
    Estimator estimator{};
    StreamKey key{};

    void validate() const;
};

struct NormRecord {
    std::string norm_id;
    TailEstimate px;  // P(||X|| > 1)
    TailEstimate py;  // P(lambda ||Y|| > 1)
    Verdict verdict = Verdict::holds;
};

struct DominationReport {
    std::string label;
    double kappa = 1.0;
    double lambda = 1.0;
    TailMethod x_method = TailMethod::enumeration;
    TailMethod y_method = TailMethod::enumeration;
    std::vector<NormRecord> records;
    Verdict verdict = Verdict::holds;
    /// Intermediate checks of multi-step experiments, in execution order.
    std::vector<DominationReport> stages;

    std::size_t count(Verdict v) const noexcept;
};

/// Per-norm comparison of P(||X|| > 1) with kappa P(lambda ||Y|| > 1). Exact
/// records use exact_leq; otherwise violated iff px.lower > kappa py.upper and
/// holds iff px.upper <= kappa py.lower.
DominationReport check_domination(const DominationQuery& q);

nlohmann::json to_json(const DominationReport& r);
/// norm_id, px, px_lower, px_upper, kappa_py, kappa_py_lower, kappa_py_upper, verdict
std::string scatter_csv(const DominationReport& r);

// Proxy -----------------------------------------------------------------------

/// Ceiling on (product support) x (sign patterns) for doubly exact computations.
inline constexpr std::uint64_t kJointEnumerationCap = std::uint64_t{1} << 26;

struct ProxyValue {
    double value = 0.0;
    SlackMethod method = SlackMethod::exact;
    double standard_error = 0.0;
    std::uint64_t outer_samples = 0;
    std::uint64_t inner_samples = 0;  // 0 when the inner expectation is exact
};

/// Exact proxy for finite-support components: outer sum over outcomes, inner
/// exact sign average, clamped at 1.
ProxyValue proxy_exact(const ProductLaw& law, const Norm& norm,
                       std::uint64_t cap = kDefaultEnumerationCap);

struct ProxyBudget {
    std::uint64_t outer = 100'000;
    std::uint64_t inner = 10'000;  // sign draws per outer sample when n exceeds inner_exact_max
    std::size_t inner_exact_max = kSignEnumerationCap;
};

/// Monte Carlo over (X_i); the inner sign average is exact for n <= inner_exact_max.
ProxyValue proxy_mc(const ProductLaw& law, const Norm& norm, const ProxyBudget& budget, StreamKey key);

/// 1/p + 4/(1 - sqrt(2p)); equals 16 at p = 1/8.
double proxy_upper_constant(double p);

struct ProxyBoundReports {
    double proxy = 0.0;
    SlackReport lower;  // alpha P(||S|| > 1+alpha) <= proxy
    SlackReport upper;  // proxy <= C(p) P(||S|| > 1)
};

ProxyBoundReports proxy_bound_check(const ProductLaw& law, const Norm& norm, double alpha,
                                    double p = 0.125, std::uint64_t cap = kDefaultEnumerationCap);

/// Exact per-index check that P(||X_i|| > s) <= P(||Y_i|| > s) for every s >= 0
/// (all dilates of the norm ball); throws PreconditionError naming the index.
void require_scaled_domination(const ProductLaw& x, const ProductLaw& y, const Norm& norm,
                               std::uint64_t cap = kDefaultEnumerationCap);

/// P(F(X) > t) <= P(F(Y) > t) for F = E_eps(||sum eps_i .|| - 1)_+ at each t, then
/// the integrated comparison of the two proxies (named "integrated").
std::vector<SlackReport> conditional_convexity_check(const ProductLaw& x, const ProductLaw& y,
                                                     const Norm& norm, const std::vector<double>& t_grid,
                                                     std::uint64_t cap = kDefaultEnumerationCap);

using SourcePair = std::pair<Source, Source>;

/// (16 ceil(kappa) / alpha, (1+alpha) ceil(kappa) lambda).
std::pair<double, double> tensorisation_constants(double kappa, double lambda, double alpha);

/// Checks every pair at (kappa, lambda) (stages), then the sums at the
/// tensorised constants. A violated pair throws PreconditionError.
DominationReport tensorisation_experiment(const std::vector<SourcePair>& pairs, double kappa, double lambda,
                                          double alpha, const std::vector<Norm>& norms,
                                          const Estimator& estimator, StreamKey key);

/// (p/4) 1{E||sum eps_i v_i|| > 2/p} <= P_delta(E||sum eps_i delta_i v_i|| > 1), delta_i ~ Bernoulli(p).
SlackReport removedelta_check(const std::vector<Vector>& v, const Norm& norm, double p);

enum class ReductionRoute { split, thin };

std::string_view to_string(ReductionRoute route) noexcept;

/// split: (ceil(kappa) 16/alpha, ceil(kappa) (1+alpha) lambda);
/// thin: (64 kappa/alpha, 2 (1+alpha) kappa lambda).
std::pair<double, double> reduction_constants(double kappa, double lambda, double alpha, ReductionRoute route);

/// Reduces (kappa, lambda)-domination to the kappa = 1 case through Bernoulli
/// thinning of the X_i. Stages: the thinned pairs at (1, lambda), the thinned
/// sum against the Y sum, then the final check at reduction_constants.
DominationReport reduction_experiment(const std::vector<SourcePair>& pairs, double kappa, double lambda,
                                      double alpha, ReductionRoute route, const std::vector<Norm>& norms,
                                      const Estimator& estimator, StreamKey key);

}  // namespace symdom
