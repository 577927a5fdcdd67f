#include "symdom/estimation.hpp"

#include "symdom/parallel.hpp"

namespace symdom {

void Estimator::validate() const {
    if (samples == 0) throw ParameterError("estimator: samples must be >= 1");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw ParameterError("estimator: confidence must lie in (0,1)");
    if (enumeration_cap == 0) throw ParameterError("estimator: enumeration cap must be >= 1");
}

std::string_view to_string(Estimator::Mode mode) noexcept {
    switch (mode) {
        case Estimator::Mode::automatic: return "auto";
        case Estimator::Mode::exact: return "exact";
        case Estimator::Mode::monte_carlo: return "mc";
    }
    return "?";
}

std::string_view to_string(TailMethod method) noexcept {
    switch (method) {
        case TailMethod::enumeration: return "enumeration";
        case TailMethod::closed_form: return "closed_form";
        case TailMethod::monte_carlo: return "monte_carlo";
    }
    return "?";
}

TailMethod tail_method(const ProductLaw& law, const Estimator& estimator) {
    if (estimator.mode == Estimator::Mode::monte_carlo) return TailMethod::monte_carlo;
    const std::uint64_t support = law.support_size(estimator.enumeration_cap);
    if (support != 0 && support <= estimator.enumeration_cap) return TailMethod::enumeration;
    if (law.size() == 1 && law.dimension() == 1 && law[0].has_survival())
        return TailMethod::closed_form;
    if (estimator.mode == Estimator::Mode::exact) {
        if (support > estimator.enumeration_cap)
            throw CapacityError("exact tail: product support exceeds cap", support,
                                estimator.enumeration_cap);
        throw ParameterError("exact tail requested for a law with no finite support or closed form");
    }
    return TailMethod::monte_carlo;
}

std::vector<TailEstimate> tail_probabilities(const ProductLaw& law, std::span<const Norm> norms,
                                             std::span<const double> thresholds,
                                             const Estimator& estimator, StreamKey key) {
    estimator.validate();
    const std::size_t dim = law.dimension();
    for (const auto& n : norms)
        if (n.dimension() != dim) throw ParameterError("tail probabilities: norm/law dimension mismatch");
    const std::size_t cells = norms.size() * thresholds.size();
    std::vector<TailEstimate> out(cells);
    if (cells == 0) return out;

    switch (tail_method(law, estimator)) {
        case TailMethod::enumeration: {
            const auto points = exact_sum(law, estimator.enumeration_cap);
            std::vector<double> mass(cells, 0.0);
            for (std::size_t i = 0; i < points->size(); ++i) {
                for (std::size_t j = 0; j < norms.size(); ++j) {
                    const double v = norms[j].evaluate(points->point(i));
                    for (std::size_t k = 0; k < thresholds.size(); ++k)
                        if (v > thresholds[k]) mass[j * thresholds.size() + k] += points->weights[i];
                }
            }
            for (std::size_t c = 0; c < cells; ++c) out[c] = TailEstimate::exact_value(std::min(1.0, mass[c]));
            return out;
        }
        case TailMethod::closed_form: {
            const double unit = 1.0;
            for (std::size_t j = 0; j < norms.size(); ++j) {
                const double c = norms[j].evaluate(&unit);
                for (std::size_t k = 0; k < thresholds.size(); ++k)
                    out[j * thresholds.size() + k] =
                        TailEstimate::exact_value(*law[0].survival(thresholds[k] / c));
            }
            return out;
        }
        case TailMethod::monte_carlo: break;
    }

    const std::uint64_t samples = estimator.samples;
    const std::uint64_t chunks = parallel::chunk_count(samples);
    std::vector<std::vector<std::uint64_t>> partial(chunks);
    parallel::for_each_index(chunks, [&](std::uint64_t chunk) {
        RandomStream rs(key, static_cast<std::uint32_t>(chunk));
        std::vector<std::uint64_t> hits(cells, 0);
        std::vector<double> parts(law.size() * dim);
        std::vector<double> sum(dim);
        const std::uint64_t len = parallel::chunk_length(samples, chunk);
        for (std::uint64_t s = 0; s < len; ++s) {
            law.sample_components(rs, parts.data());
            std::fill(sum.begin(), sum.end(), 0.0);
            for (std::size_t i = 0; i < law.size(); ++i)
                for (std::size_t k = 0; k < dim; ++k) sum[k] += parts[i * dim + k];
            for (std::size_t j = 0; j < norms.size(); ++j) {
                const double v = norms[j].evaluate(sum.data());
                for (std::size_t k = 0; k < thresholds.size(); ++k)
                    hits[j * thresholds.size() + k] += v > thresholds[k];
            }
        }
        partial[chunk] = std::move(hits);
    });
    std::vector<std::uint64_t> total(cells, 0);
    for (const auto& h : partial)
        for (std::size_t c = 0; c < cells; ++c) total[c] += h[c];
    for (std::size_t c = 0; c < cells; ++c)
        out[c] = TailEstimate::from_counts(total[c], samples, estimator.confidence);
    return out;
}

}  // namespace symdom
