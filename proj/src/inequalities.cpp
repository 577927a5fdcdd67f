#include "symdom/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace symdom {

namespace {

std::string_view method_name(SlackMethod m) { return m == SlackMethod::exact ? "exact" : "mc"; }

struct MeanSummary {
    double mean = 0.0;
    Interval ci{};
};

MeanSummary summarize_mean(const std::vector<double>& values, double confidence,
                           SignTransform transform) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double u : values) {
        const double x = transform(u);
        sum += x;
        sum_sq += x * x;
    }
    const double n = static_cast<double>(values.size());
    const double mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - mean * mean) * n / std::max(1.0, n - 1.0);
    const double half = normal_two_sided_quantile(confidence) * std::sqrt(var / n);
    return {mean, {std::max(0.0, mean - half), mean + half}};
}

TailEstimate count_above(const std::vector<double>& values, double t, double confidence) {
    std::uint64_t hits = 0;
    for (double u : values) hits += u > t;
    return TailEstimate::from_counts(hits, values.size(), confidence);
}

Interval interval_of(const TailEstimate& e) { return {e.lower, e.upper}; }

void check_sign_vectors(const std::vector<Vector>& v, const Norm& norm) {
    if (v.empty()) throw ParameterError("sign instance: need at least one vector");
    for (const auto& x : v)
        if (x.size() != norm.dimension())
            throw ParameterError("sign instance: vector dimension does not match the norm");
}

}  // namespace

void SignInstance::validate() const { check_sign_vectors(vectors, norm); }

SlackReport SlackReport::exact(std::string name, double lhs, double rhs) {
    SlackReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.holds = exact_leq(lhs, rhs);
    r.verdict = r.holds ? Verdict::holds : Verdict::violated;
    r.lhs_interval = {lhs, lhs};
    r.rhs_interval = {rhs, rhs};
    return r;
}

SlackReport SlackReport::monte_carlo(std::string name, double lhs, Interval lhs_ci, double rhs,
                                     Interval rhs_ci, std::uint64_t samples, double confidence) {
    SlackReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.method = SlackMethod::monte_carlo;
    r.samples = samples;
    r.confidence = confidence;
    r.lhs_interval = lhs_ci;
    r.rhs_interval = rhs_ci;
    if (lhs_ci.lower > rhs_ci.upper)
        r.verdict = Verdict::violated;
    else if (lhs_ci.upper <= rhs_ci.lower)
        r.verdict = Verdict::holds;
    else
        r.verdict = Verdict::inconclusive;
    r.holds = r.verdict != Verdict::violated;
    return r;
}

SlackReport SlackReport::skip(std::string name, std::string why) {
    SlackReport r;
    r.name = std::move(name);
    r.skipped = true;
    r.note = std::move(why);
    r.verdict = Verdict::inconclusive;
    r.lhs = r.rhs = r.slack = std::numeric_limits<double>::quiet_NaN();
    return r;
}

nlohmann::json to_json(const SlackReport& r) {
    nlohmann::json j;
    j["name"] = r.name;
    if (r.skipped) {
        j["skipped"] = true;
        j["note"] = r.note;
        return j;
    }
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["slack"] = r.slack;
    j["holds"] = r.holds;
    j["verdict"] = std::string(to_string(r.verdict));
    j["method"] = std::string(method_name(r.method));
    if (r.method == SlackMethod::monte_carlo) {
        j["samples"] = r.samples;
        j["confidence"] = r.confidence;
        j["lhs_ci"] = {r.lhs_interval.lower, r.lhs_interval.upper};
        j["rhs_ci"] = {r.rhs_interval.lower, r.rhs_interval.upper};
    }
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

namespace detail {

void check_sign_cap(std::size_t n) {
    if (n == 0) throw ParameterError("sign enumeration: need at least one vector");
    if (n > kSignEnumerationCap)
        throw CapacityError("sign enumeration: too many vectors", n, kSignEnumerationCap);
}

std::vector<double> sample_sign_norms(std::span<const Vector> v, const Norm& norm,
                                      const SignMonteCarlo& mc) {
    if (mc.samples == 0) throw ParameterError("sign Monte Carlo: samples must be >= 1");
    const std::size_t dim = norm.dimension();
    std::vector<double> out(mc.samples);
    const std::uint64_t chunks = parallel::chunk_count(mc.samples);
    parallel::for_each_index(chunks, [&](std::uint64_t chunk) {
        RandomStream rs(mc.key, static_cast<std::uint32_t>(chunk));
        const std::uint64_t begin = chunk * parallel::kChunkSize;
        const std::uint64_t len = parallel::chunk_length(mc.samples, chunk);
        double s[kMaxDimension];
        for (std::uint64_t i = 0; i < len; ++i) {
            std::fill(s, s + dim, 0.0);
            for (const auto& w : v) {
                const double e = rs.sign();
                for (std::size_t k = 0; k < dim; ++k) s[k] += e * w[k];
            }
            out[begin + i] = norm.evaluate(s);
        }
    });
    return out;
}

}  // namespace detail

double sign_tail_exact(const SignInstance& inst, double t) {
    inst.validate();
    const auto sum = detail::sign_pattern_sums<1>(
        inst.vectors, inst.norm, [t](double u) { return std::array<double, 1>{u > t ? 1.0 : 0.0}; });
    return sum[0] / sign_pattern_count(inst.size());
}

double sign_mean_exact(const SignInstance& inst, SignTransform transform) {
    inst.validate();
    const auto sum = detail::sign_pattern_sums<1>(
        inst.vectors, inst.norm, [transform](double u) { return std::array<double, 1>{transform(u)}; });
    return sum[0] / sign_pattern_count(inst.size());
}

SlackReport verify_kahane(const SignInstance& inst, double s, double t, const SignMonteCarlo& mc) {
    inst.validate();
    if (!(s > 0.0) || !(t > 0.0)) throw ParameterError("kahane: levels s, t must be positive");
    if (inst.size() <= kSignEnumerationCap) {
        const auto sums = detail::sign_pattern_sums<3>(inst.vectors, inst.norm, [&](double u) {
            return std::array<double, 3>{u > s + t ? 1.0 : 0.0, u > s ? 1.0 : 0.0, u > t ? 1.0 : 0.0};
        });
        const double count = sign_pattern_count(inst.size());
        return SlackReport::exact("kahane", sums[0] / count, 4.0 * (sums[1] / count) * (sums[2] / count));
    }
    const auto values = detail::sample_sign_norms(inst.vectors, inst.norm, mc);
    const auto a = count_above(values, s + t, mc.confidence);
    const auto b = count_above(values, s, mc.confidence);
    const auto c = count_above(values, t, mc.confidence);
    return SlackReport::monte_carlo("kahane", a.value, interval_of(a), 4.0 * b.value * c.value,
                                    {4.0 * b.lower * c.lower, 4.0 * b.upper * c.upper}, mc.samples,
                                    mc.confidence);
}

SlackReport verify_l1_l2(const SignInstance& inst, const SignMonteCarlo& mc) {
    inst.validate();
    if (inst.size() <= kSignEnumerationCap) {
        const auto sums = detail::sign_pattern_sums<2>(
            inst.vectors, inst.norm, [](double u) { return std::array<double, 2>{u * u, u}; });
        const double count = sign_pattern_count(inst.size());
        const double m1 = sums[1] / count;
        return SlackReport::exact("l1_l2", sums[0] / count, 2.0 * m1 * m1);
    }
    const auto values = detail::sample_sign_norms(inst.vectors, inst.norm, mc);
    const auto sq = summarize_mean(values, mc.confidence, SignTransform::square());
    const auto m1 = summarize_mean(values, mc.confidence, SignTransform::identity());
    return SlackReport::monte_carlo("l1_l2", sq.mean, sq.ci, 2.0 * m1.mean * m1.mean,
                                    {2.0 * m1.ci.lower * m1.ci.lower, 2.0 * m1.ci.upper * m1.ci.upper},
                                    mc.samples, mc.confidence);
}

SlackReport verify_paley_zygmund(const SignInstance& inst, double theta, const SignMonteCarlo& mc) {
    inst.validate();
    if (!(theta > 0.0 && theta < 1.0)) throw ParameterError("paley-zygmund: theta must lie in (0,1)");
    const double bound = 0.5 * (1.0 - theta) * (1.0 - theta);
    const bool degenerate = std::all_of(inst.vectors.begin(), inst.vectors.end(),
                                        [&](const Vector& v) { return inst.norm(v) == 0.0; });
    if (degenerate) return SlackReport::skip("paley_zygmund", "sum is identically zero");
    if (inst.size() <= kSignEnumerationCap) {
        const double mean = sign_mean_exact(inst, SignTransform::identity());
        return SlackReport::exact("paley_zygmund", bound, sign_tail_exact(inst, theta * mean));
    }
    SignMonteCarlo first = mc;
    first.key = mc.key.child("inequalities.pz.mean");
    SignMonteCarlo second = mc;
    second.key = mc.key.child("inequalities.pz.tail");
    const auto m = summarize_mean(detail::sample_sign_norms(inst.vectors, inst.norm, first),
                                  mc.confidence, SignTransform::identity());
    const auto values = detail::sample_sign_norms(inst.vectors, inst.norm, second);
    const auto mid = count_above(values, theta * m.mean, mc.confidence);
    const auto low = count_above(values, theta * m.ci.upper, mc.confidence);
    const auto high = count_above(values, theta * m.ci.lower, mc.confidence);
    return SlackReport::monte_carlo("paley_zygmund", bound, {bound, bound}, mid.value,
                                    {low.lower, high.upper}, mc.samples, mc.confidence);
}

SlackReport verify_contraction(const std::vector<Vector>& v, const std::vector<double>& a,
                               const std::vector<double>& b, const Norm& norm, const SignMonteCarlo& mc) {
    check_sign_vectors(v, norm);
    if (a.size() != v.size() || b.size() != v.size())
        throw ParameterError("contraction: coefficient sequences must match the number of vectors");
    SignInstance left{{}, norm};
    SignInstance right{{}, norm};
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(std::abs(a[i]) <= std::abs(b[i])))
            throw ParameterError("contraction: need |a_i| <= |b_i| at index " + std::to_string(i));
        Vector x = v[i];
        Vector y = v[i];
        for (auto& c : x) c *= a[i];
        for (auto& c : y) c *= b[i];
        left.vectors.push_back(std::move(x));
        right.vectors.push_back(std::move(y));
    }
    if (v.size() <= kSignEnumerationCap)
        return SlackReport::exact("contraction", sign_mean_exact(left, SignTransform::identity()),
                                  sign_mean_exact(right, SignTransform::identity()));
    SignMonteCarlo first = mc;
    first.key = mc.key.child("inequalities.contraction", 0);
    SignMonteCarlo second = mc;
    second.key = mc.key.child("inequalities.contraction", 1);
    const auto l = summarize_mean(detail::sample_sign_norms(left.vectors, norm, first), mc.confidence,
                                  SignTransform::identity());
    const auto r = summarize_mean(detail::sample_sign_norms(right.vectors, norm, second), mc.confidence,
                                  SignTransform::identity());
    return SlackReport::monte_carlo("contraction", l.mean, l.ci, r.mean, r.ci, mc.samples, mc.confidence);
}

namespace {

// Indicator counters gathered per outcome or sample.
enum SumCounter : std::size_t {
    kMaxPartialAboveT,   // S_n^* > t
    kSumAboveT,          // ||S_n|| > t
    kMaxSummandAboveT,   // X_n^* > t
    kMaxPartialAboveStu, // S_n^* > s+t+u
    kMaxSummandAboveS,   // X_n^* > s
    kSumAboveU,          // ||S_n|| > u
    kSumCounters
};

struct SumScan {
    std::array<bool, kSumCounters> hit{};
    std::vector<bool> summand_above_t;
};

void scan_outcome(const double* parts, std::size_t n, std::size_t dim, const Norm& norm,
                  const SumLevels& lv, SumScan& out) {
    double partial[kMaxDimension] = {};
    double max_partial = 0.0;
    double max_summand = 0.0;
    double last = 0.0;
    out.summand_above_t.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const double* x = parts + i * dim;
        const double xn = norm.evaluate(x);
        out.summand_above_t[i] = xn > lv.t;
        max_summand = std::max(max_summand, xn);
        for (std::size_t k = 0; k < dim; ++k) partial[k] += x[k];
        last = norm.evaluate(partial);
        max_partial = std::max(max_partial, last);
    }
    out.hit[kMaxPartialAboveT] = max_partial > lv.t;
    out.hit[kSumAboveT] = last > lv.t;
    out.hit[kMaxSummandAboveT] = max_summand > lv.t;
    out.hit[kMaxPartialAboveStu] = max_partial > lv.s + lv.t + lv.u;
    out.hit[kMaxSummandAboveS] = max_summand > lv.s;
    out.hit[kSumAboveU] = last > lv.u;
}

constexpr const char* kSummandTails = "summand_tails";

}  // namespace

SumInequalityReports verify_sum_inequalities(const ProductLaw& law, const Norm& norm, SumLevels levels,
                                             const Estimator& estimator, StreamKey key) {
    estimator.validate();
    if (!(levels.s >= 0.0 && levels.t >= 0.0 && levels.u >= 0.0))
        throw ParameterError("sum inequalities: levels must be nonnegative");
    const std::size_t n = law.size();
    const std::size_t dim = law.dimension();
    if (norm.dimension() != dim) throw ParameterError("sum inequalities: norm/law dimension mismatch");

    const TailMethod method = tail_method(law, estimator);
    SumInequalityReports out;

    if (method != TailMethod::monte_carlo) {
        const auto comps = law.exact_components(estimator.enumeration_cap);
        if (!comps)
            throw ParameterError("sum inequalities: exact mode needs finite-support components");
        std::array<double, kSumCounters> mass{};
        SumScan scan;
        for_each_outcome(*comps, estimator.enumeration_cap, [&](std::span<const double> coords, double p) {
            scan_outcome(coords.data(), n, dim, norm, levels, scan);
            for (std::size_t c = 0; c < kSumCounters; ++c)
                if (scan.hit[c]) mass[c] += p;
        });
        double summand_sum = 0.0;
        for (const auto& comp : *comps)
            for (const auto& atom : comp.atoms())
                if (norm(atom.at) > levels.t) summand_sum += atom.probability;
        for (auto& m : mass) m = std::min(m, 1.0);

        out.levy = SlackReport::exact("levy", mass[kMaxPartialAboveT], 2.0 * mass[kSumAboveT]);
        out.max_summand = SlackReport::exact("max_summand", mass[kMaxSummandAboveT], 2.0 * mass[kSumAboveT]);
        out.hoffmann_jorgensen = SlackReport::exact(
            "hoffmann_jorgensen", mass[kMaxPartialAboveStu],
            mass[kMaxSummandAboveS] + 2.0 * mass[kMaxPartialAboveT] * mass[kSumAboveU]);
        const double q = mass[kMaxSummandAboveT];
        if (q >= 1.0)
            out.summand_tails = SlackReport::skip(kSummandTails, "P(max_j ||X_j|| > t) = 1");
        else
            out.summand_tails = SlackReport::exact(kSummandTails, summand_sum, q / (1.0 - q));
        return out;
    }

    const std::uint64_t samples = estimator.samples;
    const std::uint64_t chunks = parallel::chunk_count(samples);
    const std::size_t width = kSumCounters + n;
    std::vector<std::vector<std::uint64_t>> partial(chunks);
    parallel::for_each_index(chunks, [&](std::uint64_t chunk) {
        RandomStream rs(key, static_cast<std::uint32_t>(chunk));
        std::vector<std::uint64_t> counts(width, 0);
        std::vector<double> parts(n * dim);
        SumScan scan;
        const std::uint64_t len = parallel::chunk_length(samples, chunk);
        for (std::uint64_t s = 0; s < len; ++s) {
            law.sample_components(rs, parts.data());
            scan_outcome(parts.data(), n, dim, norm, levels, scan);
            for (std::size_t c = 0; c < kSumCounters; ++c) counts[c] += scan.hit[c];
            for (std::size_t i = 0; i < n; ++i) counts[kSumCounters + i] += scan.summand_above_t[i];
        }
        partial[chunk] = std::move(counts);
    });
    std::vector<std::uint64_t> total(width, 0);
    for (const auto& p : partial)
        for (std::size_t c = 0; c < width; ++c) total[c] += p[c];

    const double conf = estimator.confidence;
    auto est = [&](std::size_t c) { return TailEstimate::from_counts(total[c], samples, conf); };
    const auto max_partial_t = est(kMaxPartialAboveT);
    const auto sum_t = est(kSumAboveT);
    const auto max_summand_t = est(kMaxSummandAboveT);
    const auto max_partial_stu = est(kMaxPartialAboveStu);
    const auto max_summand_s = est(kMaxSummandAboveS);
    const auto sum_u = est(kSumAboveU);

    const Interval twice_sum{2.0 * sum_t.lower, 2.0 * sum_t.upper};
    out.levy = SlackReport::monte_carlo("levy", max_partial_t.value, interval_of(max_partial_t),
                                        2.0 * sum_t.value, twice_sum, samples, conf);
    out.max_summand = SlackReport::monte_carlo("max_summand", max_summand_t.value,
                                               interval_of(max_summand_t), 2.0 * sum_t.value, twice_sum,
                                               samples, conf);
    out.hoffmann_jorgensen = SlackReport::monte_carlo(
        "hoffmann_jorgensen", max_partial_stu.value, interval_of(max_partial_stu),
        max_summand_s.value + 2.0 * max_partial_t.value * sum_u.value,
        {max_summand_s.lower + 2.0 * max_partial_t.lower * sum_u.lower,
         max_summand_s.upper + 2.0 * max_partial_t.upper * sum_u.upper},
        samples, conf);

    if (total[kMaxSummandAboveT] == samples) {
        out.summand_tails = SlackReport::skip(kSummandTails, "P(max_j ||X_j|| > t) = 1 in every sample");
    } else {
        double value = 0.0, lo = 0.0, hi = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto e = est(kSumCounters + i);
            value += e.value;
            lo += e.lower;
            hi += e.upper;
        }
        const auto ratio = [](double q) {
            return q >= 1.0 ? std::numeric_limits<double>::infinity() : q / (1.0 - q);
        };
        out.summand_tails = SlackReport::monte_carlo(
            kSummandTails, value, {lo, hi}, ratio(max_summand_t.value),
            {ratio(max_summand_t.lower), ratio(max_summand_t.upper)}, samples, conf);
    }
    return out;
}

}  // namespace symdom
