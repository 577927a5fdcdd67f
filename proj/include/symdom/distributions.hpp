#pragma once

// Symmetric random vectors in R^d: exactly representable finite-support laws
// and samplers for the continuous families used in the experiments.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "symdom/core.hpp"
#include "symdom/rng.hpp"

namespace symdom {

struct Atom {
    Vector at;
    double probability = 0.0;
};

/// Symmetric law with finitely many atoms. Every nonzero atom v comes with
/// -v at the same probability; the origin may appear alone.
class FiniteSupportDist {
public:
    FiniteSupportDist(std::size_t dim, std::vector<Atom> atoms);

    /// Builds +/-v for every listed atom (each side gets the listed
    /// probability) plus an optional atom at the origin.
    static FiniteSupportDist symmetric(std::size_t dim, const std::vector<Atom>& half,
                                       double zero_mass = 0.0);
    /// Scalar +/-magnitude with probability 1/2 each.
    static FiniteSupportDist rademacher(double magnitude = 1.0);
    static FiniteSupportDist point_mass_at_origin(std::size_t dim);

    std::size_t dimension() const noexcept { return dim_; }
    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }

    FiniteSupportDist scaled(double factor) const;

private:
    std::size_t dim_;
    std::vector<Atom> atoms_;
};

/// Exact Bernoulli(p) thinning: each atom keeps a fraction p of its mass and
/// the origin receives the rest.
FiniteSupportDist thin_exact(const FiniteSupportDist& dist, double keep);

/// An immutable, shareable symmetric random-vector source.
class Source {
public:
    enum class Family { finite, gaussian, symmetric_stable, pareto_tail, bernoulli_thinned, scaled,
                        iid_product };

    static Source finite(FiniteSupportDist dist);
    /// Centred Gaussian with the given (symmetric PSD) covariance.
    static Source gaussian(const Eigen::MatrixXd& covariance);
    /// Scalar symmetric stable law with characteristic function exp(-|scale*u|^index).
    static Source symmetric_stable(double index, double scale = 1.0);
    /// Scalar law with P(|X| > t) = min(1, t^-exponent) and a uniform sign.
    static Source pareto_tail(double exponent);
    /// delta * X with delta ~ Bernoulli(keep) independent of X.
    static Source bernoulli_thinned(const Source& inner, double keep);
    /// factor * X; any real factor.
    static Source scaled(const Source& inner, double factor);
    /// Independent sources stacked into one vector of the summed dimension.
    static Source iid_product(const std::vector<Source>& parts);

    std::size_t dimension() const noexcept;
    Family family() const noexcept;
    std::string describe() const;

    /// Draws one vector into out (size dimension()).
    void sample(RandomStream& rs, double* out) const;

    /// Finite-support form when one exists with at most `cap` atoms.
    std::optional<FiniteSupportDist> exact(std::uint64_t cap = 1'000'000) const;

    /// Closed-form P(|X| > t) for scalar sources that have one.
    std::optional<double> survival(double t) const;
    bool has_survival() const;

    struct Node;

private:
    explicit Source(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Returns the thinned source (sampling path).
Source thin(const Source& source, double keep);

/// count x dim samples, row-major. Deterministic in (seed, count) and
/// independent of the worker count.
std::vector<double> sample(const Source& source, std::uint64_t count, std::uint64_t seed);

/// Independent components X_1..X_n of equal dimension; the random vector of
/// interest is usually their sum.
class ProductLaw {
public:
    explicit ProductLaw(std::vector<Source> components);
    ProductLaw(std::initializer_list<Source> components)
        : ProductLaw(std::vector<Source>(components)) {}

    std::size_t size() const noexcept { return components_.size(); }
    std::size_t dimension() const noexcept { return components_.front().dimension(); }
    const std::vector<Source>& components() const noexcept { return components_; }
    const Source& operator[](std::size_t i) const { return components_.at(i); }

    /// Finite-support forms of all components, if every one has one.
    std::optional<std::vector<FiniteSupportDist>> exact_components(std::uint64_t cap) const;

    /// Product support size, saturating at UINT64_MAX; 0 if some component is not finite.
    std::uint64_t support_size(std::uint64_t cap) const;

    /// Draws X_1..X_n into out (n * dim values).
    void sample_components(RandomStream& rs, double* out) const;

private:
    std::vector<Source> components_;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// One outcome of a product of finite-support laws.
struct Outcome {
    std::vector<Vector> parts;
    double probability = 0.0;
};

/// Visits every tuple of atoms, passing the n*d flattened coordinates and the
/// tuple probability. Throws CapacityError past the cap.
void for_each_outcome(const std::vector<FiniteSupportDist>& components, std::uint64_t cap,
                      const std::function<void(std::span<const double>, double)>& visit);

std::vector<Outcome> enumerate(const ProductLaw& law, std::uint64_t cap = kDefaultEnumerationCap);

/// Law of X_1 + ... + X_n as weighted points (not merged).
struct WeightedPoints {
    std::size_t dim = 0;
    std::vector<double> coords;  // size() * dim
    std::vector<double> weights;

    std::size_t size() const noexcept { return weights.size(); }
    const double* point(std::size_t i) const noexcept { return coords.data() + i * dim; }
};

std::optional<WeightedPoints> exact_sum(const ProductLaw& law, std::uint64_t cap);

/// Auxiliary splitting variables delta_{i,k} on [0,1]^n: delta_{i,k}(t) = 1
/// iff t_i lies in the k-th of m = ceil(kappa) equal subintervals.
class SplitScheme {
public:
    SplitScheme(double kappa, std::size_t n);

    std::size_t pieces() const noexcept { return m_; }
    std::size_t size() const noexcept { return n_; }
    double piece_probability() const noexcept { return 1.0 / static_cast<double>(m_); }

    /// Subinterval [(k-1)/m, k/m) for k = 1..m; the last one is closed at 1.
    bool indicator(std::size_t i, std::size_t k, std::span<const double> t) const;

private:
    std::size_t m_;
    std::size_t n_;
};

SplitScheme split_scheme(double kappa, std::size_t n);

/// P(|X| > t) for the symmetric 1/2-stable law with unit scale, by
/// quadrature over the difference of two Levy(1/4) variables.
double half_stable_tail(double t);

}  // namespace symdom
