#pragma once

// Continuous norms on R^d. A symmetric convex body is handled only through
// its gauge: x lies in the body K_N = {N <= 1} iff N(x) <= 1.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

namespace symdom {

class Norm {
public:
    enum class Kind { lp, weighted_lp, ellipsoid, polytope_gauge, scaled };

    /// ||x||_p on R^dim; p may be +infinity.
    static Norm lp(std::size_t dim, double p);
    /// ||diag(w) x||_p with strictly positive weights.
    static Norm weighted_lp(double p, std::vector<double> weights);
    /// sqrt(x^T A x) for symmetric positive-definite A.
    static Norm ellipsoid(const Eigen::MatrixXd& a);
    /// max_j |<u_j, x>| over directions spanning R^d.
    static Norm polytope_gauge(const std::vector<std::vector<double>>& directions);
    /// factor * inner(x), factor > 0.
    static Norm scaled(const Norm& inner, double factor);

    std::size_t dimension() const noexcept;
    Kind kind() const noexcept;

    /// Evaluates the norm; throws ParameterError on a dimension mismatch.
    double operator()(std::span<const double> x) const;
    /// Evaluates without the dimension check; x must hold dimension() values.
    double evaluate(const double* x) const noexcept;

    /// Short human-readable id, stable across runs.
    std::string describe() const;

    nlohmann::json to_json() const;
    static Norm from_json(const nlohmann::json& j);

    struct Impl;

private:
    explicit Norm(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

inline double evaluate(const Norm& norm, std::span<const double> x) { return norm(x); }

/// Which variants random_norm_family may draw.
struct NormFamilyMix {
    enum class Kinds { all, lp_only, ellipsoid_only, polytope_only };
    Kinds kinds = Kinds::all;
    /// Random members are wrapped in scaled(., c) with c log-uniform in this range.
    double scale_min = 1.0;
    double scale_max = 1.0;
    /// Upper bound on the condition number of random ellipsoids.
    double max_condition = 1e3;
};

/// Deterministic finite stand-in for "every continuous norm". The first
/// members are the unscaled l2, l1 and l-infinity norms (as many as fit);
/// the rest are random members of the requested kinds.
std::vector<Norm> random_norm_family(std::uint64_t seed, std::size_t dim, std::size_t size,
                                     const NormFamilyMix& mix = {});

nlohmann::json family_to_json(const std::vector<Norm>& family);
std::vector<Norm> family_from_json(const nlohmann::json& j);

}  // namespace symdom
