#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "symdom/distributions.hpp"
#include "symdom/geometry.hpp"
#include "symdom/rng.hpp"
#include "symdom/stats.hpp"

namespace symdom {

/// How probabilities are obtained: exactly (enumeration or a closed-form
/// tail) or by Monte Carlo with Clopper-Pearson intervals.
struct Estimator {
    enum class Mode { automatic, exact, monte_carlo };

    Mode mode = Mode::automatic;
    std::uint64_t samples = 1'000'000;
    double confidence = 0.99;
    std::uint64_t enumeration_cap = kDefaultEnumerationCap;

    void validate() const;
};

std::string_view to_string(Estimator::Mode mode) noexcept;

enum class TailMethod { enumeration, closed_form, monte_carlo };

std::string_view to_string(TailMethod method) noexcept;

/// The route tail_probabilities takes for this law; throws ParameterError if
/// the estimator demands exactness the law cannot provide.
TailMethod tail_method(const ProductLaw& law, const Estimator& estimator);

/// P(norms[j](X_1 + ... + X_n) > thresholds[k]) at index j * thresholds.size() + k.
/// Monte Carlo cells share one sample of the sum.
std::vector<TailEstimate> tail_probabilities(const ProductLaw& law, std::span<const Norm> norms,
                                             std::span<const double> thresholds,
                                             const Estimator& estimator, StreamKey key);

}  // namespace symdom
