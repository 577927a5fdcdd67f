#include "symdom/stats.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/normal.hpp>

#include "symdom/errors.hpp"

namespace symdom {

Interval clopper_pearson(std::uint64_t hits, std::uint64_t trials, double confidence) {
    if (trials == 0) return {0.0, 1.0};
    if (hits > trials) throw ParameterError("clopper_pearson: hits exceed trials");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw ParameterError("clopper_pearson: confidence must lie in (0,1)");
    const double alpha = 1.0 - confidence;
    const auto k = static_cast<double>(hits);
    const auto n = static_cast<double>(trials);
    Interval ci;
    if (hits == 0) {
        ci.lower = 0.0;
    } else {
        ci.lower = boost::math::quantile(boost::math::beta_distribution<double>(k, n - k + 1),
                                         alpha / 2);
    }
    if (hits == trials) {
        ci.upper = 1.0;
    } else {
        ci.upper = boost::math::quantile(boost::math::beta_distribution<double>(k + 1, n - k),
                                         1 - alpha / 2);
    }
    return ci;
}

TailEstimate TailEstimate::from_counts(std::uint64_t hits, std::uint64_t samples,
                                       double confidence) {
    const Interval ci = clopper_pearson(hits, samples, confidence);
    const double p = samples ? static_cast<double>(hits) / static_cast<double>(samples) : 0.0;
    return TailEstimate{p, false, ci.lower, ci.upper, samples, hits};
}

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::inconclusive: return "inconclusive";
        case Verdict::violated: return "violated";
    }
    return "?";
}

double normal_two_sided_quantile(double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0))
        throw ParameterError("confidence must lie in (0,1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(),
                                 0.5 + confidence / 2);
}

}  // namespace symdom
