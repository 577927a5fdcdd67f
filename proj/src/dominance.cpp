#include "symdom/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "symdom/parallel.hpp"

namespace symdom {

void DominationQuery::validate() const {
    if (!(kappa >= 1.0) || !std::isfinite(kappa)) throw ParameterError("domination: kappa must be >= 1");
    if (!(lambda >= 1.0) || !std::isfinite(lambda)) throw ParameterError("domination: lambda must be >= 1");
    if (x.dimension() != y.dimension()) throw ParameterError("domination: X and Y dimensions differ");
    if (norms.empty()) throw ParameterError("domination: the norm family is empty");
    for (const auto& n : norms)
        if (n.dimension() != x.dimension()) throw ParameterError("domination: norm dimension mismatch");
    estimator.validate();
}

std::size_t DominationReport::count(Verdict v) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [v](const NormRecord& r) { return r.verdict == v; }));
}

DominationReport check_domination(const DominationQuery& q) {
    q.validate();
    DominationReport report;
    report.kappa = q.kappa;
    report.lambda = q.lambda;
    report.x_method = tail_method(q.x, q.estimator);
    report.y_method = tail_method(q.y, q.estimator);
    const double one = 1.0;
    const double inv_lambda = 1.0 / q.lambda;
    const auto px = tail_probabilities(q.x, q.norms, std::span<const double>(&one, 1), q.estimator,
                                       q.key.child("dominance.x"));
    const auto py = tail_probabilities(q.y, q.norms, std::span<const double>(&inv_lambda, 1), q.estimator,
                                       q.key.child("dominance.y"));
    report.verdict = Verdict::holds;
    for (std::size_t j = 0; j < q.norms.size(); ++j) {
        NormRecord rec{q.norms[j].describe(), px[j], py[j], Verdict::holds};
        if (px[j].exact && py[j].exact)
            rec.verdict = exact_leq(px[j].value, q.kappa * py[j].value) ? Verdict::holds : Verdict::violated;
        else if (px[j].lower > q.kappa * py[j].upper)
            rec.verdict = Verdict::violated;
        else if (px[j].upper <= q.kappa * py[j].lower)
            rec.verdict = Verdict::holds;
        else
            rec.verdict = Verdict::inconclusive;
        report.verdict = worst(report.verdict, rec.verdict);
        report.records.push_back(std::move(rec));
    }
    return report;
}

namespace {

nlohmann::json tail_json(const TailEstimate& e) {
    nlohmann::json j{{"value", e.value}, {"exact", e.exact}};
    if (!e.exact) {
        j["lower"] = e.lower;
        j["upper"] = e.upper;
        j["samples"] = e.samples;
        j["hits"] = e.hits;
    }
    return j;
}

}  // namespace

nlohmann::json to_json(const DominationReport& r) {
    nlohmann::json j;
    if (!r.label.empty()) j["label"] = r.label;
    j["kappa"] = r.kappa;
    j["lambda"] = r.lambda;
    j["x_method"] = std::string(to_string(r.x_method));
    j["y_method"] = std::string(to_string(r.y_method));
    j["verdict"] = std::string(to_string(r.verdict));
    j["counts"] = {{"holds", r.count(Verdict::holds)},
                   {"inconclusive", r.count(Verdict::inconclusive)},
                   {"violated", r.count(Verdict::violated)}};
    auto& recs = j["norms"] = nlohmann::json::array();
    for (const auto& rec : r.records)
        recs.push_back({{"norm", rec.norm_id},
                        {"px", tail_json(rec.px)},
                        {"py", tail_json(rec.py)},
                        {"verdict", std::string(to_string(rec.verdict))}});
    if (!r.stages.empty()) {
        auto& st = j["stages"] = nlohmann::json::array();
        for (const auto& s : r.stages) st.push_back(to_json(s));
    }
    return j;
}

std::string scatter_csv(const DominationReport& r) {
    std::ostringstream os;
    os << "norm_id,px,px_lower,px_upper,kappa_py,kappa_py_lower,kappa_py_upper,verdict\n";
    char buf[512];
    for (const auto& rec : r.records) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", rec.px.value, rec.px.lower,
                      rec.px.upper, r.kappa * rec.py.value, r.kappa * rec.py.lower, r.kappa * rec.py.upper);
        os << '"' << rec.norm_id << "\"," << buf << ',' << to_string(rec.verdict) << '\n';
    }
    return os.str();
}

// Proxy -----------------------------------------------------------------------

namespace {

std::uint64_t checked_joint_size(std::uint64_t support, std::size_t n) {
    const std::uint64_t patterns = std::uint64_t{1} << (n - 1);
    if (support > kJointEnumerationCap / patterns)
        throw CapacityError("proxy: outcomes x sign patterns exceed the joint cap",
                            support > std::numeric_limits<std::uint64_t>::max() / patterns
                                ? std::numeric_limits<std::uint64_t>::max()
                                : support * patterns,
                            kJointEnumerationCap);
    return support * patterns;
}

std::vector<FiniteSupportDist> finite_components(const ProductLaw& law, std::uint64_t cap,
                                                 const char* where) {
    auto comps = law.exact_components(cap);
    if (!comps) throw ParameterError(std::string(where) + ": needs finite-support components");
    return std::move(*comps);
}

std::vector<Vector> split_parts(std::span<const double> coords, std::size_t n, std::size_t dim) {
    std::vector<Vector> parts(n);
    for (std::size_t i = 0; i < n; ++i)
        parts[i].assign(coords.begin() + static_cast<std::ptrdiff_t>(i * dim),
                        coords.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim));
    return parts;
}

double inner_proxy(const std::vector<Vector>& parts, const Norm& norm) {
    return sign_mean_exact(SignInstance{parts, norm}, SignTransform::shifted_plus(1.0));
}

/// Law of F(X) = E_eps(||sum eps_i X_i|| - 1)_+ as (value, probability) pairs, merged on equal values.
std::vector<std::pair<double, double>> inner_law(const ProductLaw& law, const Norm& norm, std::uint64_t cap) {
    if (norm.dimension() != law.dimension()) throw ParameterError("proxy: norm/law dimension mismatch");
    const auto comps = finite_components(law, cap, "proxy");
    const std::size_t n = law.size();
    detail::check_sign_cap(n);
    checked_joint_size(law.support_size(cap), n);
    std::map<double, double> mass;
    for_each_outcome(comps, cap, [&](std::span<const double> coords, double p) {
        mass[inner_proxy(split_parts(coords, n, law.dimension()), norm)] += p;
    });
    return {mass.begin(), mass.end()};
}

double tail_exact(const ProductLaw& law, const Norm& norm, double t, std::uint64_t cap) {
    const auto points = exact_sum(law, cap);
    if (!points) throw ParameterError("tail: needs finite-support components");
    double mass = 0.0;
    for (std::size_t i = 0; i < points->size(); ++i)
        if (norm.evaluate(points->point(i)) > t) mass += points->weights[i];
    return std::min(mass, 1.0);
}

}  // namespace

ProxyValue proxy_exact(const ProductLaw& law, const Norm& norm, std::uint64_t cap) {
    double value = 0.0;
    for (const auto& [f, p] : inner_law(law, norm, cap)) value += p * std::min(f, 1.0);
    return ProxyValue{std::clamp(value, 0.0, 1.0), SlackMethod::exact, 0.0, 0, 0};
}

ProxyValue proxy_mc(const ProductLaw& law, const Norm& norm, const ProxyBudget& budget, StreamKey key) {
    if (budget.outer == 0) throw ParameterError("proxy: outer budget must be >= 1");
    if (norm.dimension() != law.dimension()) throw ParameterError("proxy: norm/law dimension mismatch");
    const std::size_t n = law.size();
    const std::size_t dim = law.dimension();
    const bool inner_exact = n <= std::min(budget.inner_exact_max, kSignEnumerationCap);
    if (!inner_exact && budget.inner == 0) throw ParameterError("proxy: inner budget must be >= 1");

    const std::uint64_t chunks = parallel::chunk_count(budget.outer);
    std::vector<std::pair<double, double>> partial(chunks);
    parallel::for_each_index(chunks, [&](std::uint64_t chunk) {
        RandomStream rs(key, static_cast<std::uint32_t>(chunk));
        std::vector<double> coords(n * dim);
        double s[kMaxDimension];
        double sum = 0.0;
        double sum_sq = 0.0;
        const std::uint64_t len = parallel::chunk_length(budget.outer, chunk);
        for (std::uint64_t i = 0; i < len; ++i) {
            law.sample_components(rs, coords.data());
            double f = 0.0;
            if (inner_exact) {
                f = inner_proxy(split_parts(coords, n, dim), norm);
            } else {
                for (std::uint64_t r = 0; r < budget.inner; ++r) {
                    std::fill(s, s + dim, 0.0);
                    for (std::size_t c = 0; c < n; ++c) {
                        const double e = rs.sign();
                        for (std::size_t k = 0; k < dim; ++k) s[k] += e * coords[c * dim + k];
                    }
                    f += std::max(norm.evaluate(s) - 1.0, 0.0);
                }
                f /= static_cast<double>(budget.inner);
            }
            const double g = std::min(f, 1.0);
            sum += g;
            sum_sq += g * g;
        }
        partial[chunk] = {sum, sum_sq};
    });
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto& [a, b] : partial) {
        sum += a;
        sum_sq += b;
    }
    const double m = static_cast<double>(budget.outer);
    const double mean = sum / m;
    const double var = m > 1 ? std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0)) : 0.0;
    return ProxyValue{mean, SlackMethod::monte_carlo, std::sqrt(var / m), budget.outer,
                      inner_exact ? 0 : budget.inner};
}

double proxy_upper_constant(double p) {
    if (!(p > 0.0 && p < 0.5)) throw ParameterError("proxy bound: p must lie in (0, 1/2)");
    return 1.0 / p + 4.0 / (1.0 - std::sqrt(2.0 * p));
}

ProxyBoundReports proxy_bound_check(const ProductLaw& law, const Norm& norm, double alpha, double p,
                                    std::uint64_t cap) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("proxy bound: alpha must lie in (0,1]");
    const double c = proxy_upper_constant(p);
    ProxyBoundReports out;
    out.proxy = proxy_exact(law, norm, cap).value;
    out.lower = SlackReport::exact("proxy_lower", alpha * tail_exact(law, norm, 1.0 + alpha, cap), out.proxy);
    out.upper = SlackReport::exact("proxy_upper", out.proxy, c * tail_exact(law, norm, 1.0, cap));
    return out;
}

void require_scaled_domination(const ProductLaw& x, const ProductLaw& y, const Norm& norm, std::uint64_t cap) {
    if (x.size() != y.size()) throw ParameterError("domination precheck: X and Y need the same length");
    const auto xc = finite_components(x, cap, "domination precheck");
    const auto yc = finite_components(y, cap, "domination precheck");
    for (std::size_t i = 0; i < xc.size(); ++i) {
        std::vector<double> breaks{0.0};
        for (const auto& a : xc[i].atoms()) breaks.push_back(norm(a.at));
        for (const auto& a : yc[i].atoms()) breaks.push_back(norm(a.at));
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
        auto tail = [&](const FiniteSupportDist& d, double s) {
            double m = 0.0;
            for (const auto& a : d.atoms())
                if (norm(a.at) > s) m += a.probability;
            return m;
        };
        for (double s : breaks) {
            const double px = tail(xc[i], s);
            const double py = tail(yc[i], s);
            if (!exact_leq(px, py)) {
                std::ostringstream os;
                os << "index " << i << " is not (1,1)-dominated under norm " << norm.describe()
                   << ": P(||X_i|| > " << s << ") = " << px << " > P(||Y_i|| > " << s << ") = " << py;
                throw PreconditionError(os.str());
            }
        }
    }
}

std::vector<SlackReport> conditional_convexity_check(const ProductLaw& x, const ProductLaw& y, const Norm& norm,
                                                     const std::vector<double>& t_grid, std::uint64_t cap) {
    require_scaled_domination(x, y, norm, cap);
    const auto fx = inner_law(x, norm, cap);
    const auto fy = inner_law(y, norm, cap);
    auto tail = [](const std::vector<std::pair<double, double>>& law, double t) {
        double m = 0.0;
        for (const auto& [f, p] : law)
            if (f > t) m += p;
        return std::min(m, 1.0);
    };
    std::vector<SlackReport> out;
    out.reserve(t_grid.size() + 1);
    for (double t : t_grid) {
        auto r = SlackReport::exact("distribution", tail(fx, t), tail(fy, t));
        r.note = "t=" + nlohmann::json(t).dump();
        out.push_back(std::move(r));
    }
    double ix = 0.0;
    double iy = 0.0;
    for (const auto& [f, p] : fx) ix += p * std::min(f, 1.0);
    for (const auto& [f, p] : fy) iy += p * std::min(f, 1.0);
    out.push_back(SlackReport::exact("integrated", ix, iy));
    return out;
}

// Tensorisation ---------------------------------------------------------------

namespace {

void check_pair_inputs(const std::vector<SourcePair>& pairs, double kappa, double lambda, double alpha) {
    if (pairs.empty()) throw ParameterError("tensorisation: need at least one pair");
    if (!(kappa >= 1.0 && std::isfinite(kappa))) throw ParameterError("tensorisation: kappa must be >= 1");
    if (!(lambda >= 1.0 && std::isfinite(lambda))) throw ParameterError("tensorisation: lambda must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("tensorisation: alpha must lie in (0,1]");
}

DominationReport labelled(DominationReport r, std::string label) {
    r.label = std::move(label);
    return r;
}

/// Re-checks every pair; a violated pair is a broken premise.
std::vector<DominationReport> certify_pairs(const std::vector<SourcePair>& pairs, double kappa, double lambda,
                                            const std::vector<Norm>& norms, const Estimator& est,
                                            StreamKey key, const std::vector<Source>* thinned_x = nullptr,
                                            const std::string& tag = "pair") {
    std::vector<DominationReport> out;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const Source& xi = thinned_x ? (*thinned_x)[i] : pairs[i].first;
        DominationQuery q{ProductLaw{xi}, ProductLaw{pairs[i].second}, kappa, lambda, norms, est,
                          key.child("dominance." + tag, i)};
        auto r = labelled(check_domination(q), tag + " " + std::to_string(i));
        if (r.verdict == Verdict::violated) {
            for (const auto& rec : r.records)
                if (rec.verdict == Verdict::violated)
                    throw PreconditionError(tag + " " + std::to_string(i) + " is not (" + nlohmann::json(kappa).dump() +
                                            "," + nlohmann::json(lambda).dump() + ")-dominated under norm " +
                                            rec.norm_id);
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<Source> firsts(const std::vector<SourcePair>& pairs) {
    std::vector<Source> v;
    for (const auto& p : pairs) v.push_back(p.first);
    return v;
}

std::vector<Source> seconds(const std::vector<SourcePair>& pairs) {
    std::vector<Source> v;
    for (const auto& p : pairs) v.push_back(p.second);
    return v;
}

}  // namespace

std::pair<double, double> tensorisation_constants(double kappa, double lambda, double alpha) {
    const double m = std::ceil(kappa);
    return {16.0 / alpha * m, (1.0 + alpha) * m * lambda};
}

DominationReport tensorisation_experiment(const std::vector<SourcePair>& pairs, double kappa, double lambda,
                                          double alpha, const std::vector<Norm>& norms,
                                          const Estimator& estimator, StreamKey key) {
    check_pair_inputs(pairs, kappa, lambda, alpha);
    auto stages = certify_pairs(pairs, kappa, lambda, norms, estimator, key);
    const auto [k2, l2] = tensorisation_constants(kappa, lambda, alpha);
    DominationQuery q{ProductLaw(firsts(pairs)), ProductLaw(seconds(pairs)), k2, l2, norms, estimator,
                      key.child("dominance.sum")};
    auto report = labelled(check_domination(q), "sum");
    report.stages = std::move(stages);
    return report;
}

SlackReport removedelta_check(const std::vector<Vector>& v, const Norm& norm, double p) {
    if (!(p > 0.0 && p <= 1.0)) throw ParameterError("removedelta: p must lie in (0,1]");
    if (v.empty()) throw ParameterError("removedelta: need at least one vector");
    const std::size_t n = v.size();
    detail::check_sign_cap(n);
    // sum over subsets of 2^(|delta|-1) sign patterns is about 3^n / 2
    double joint = 1.0;
    for (std::size_t i = 0; i < n; ++i) joint *= 3.0;
    if (joint > static_cast<double>(kJointEnumerationCap))
        throw CapacityError("removedelta: subsets x sign patterns exceed the joint cap",
                            static_cast<std::uint64_t>(joint), kJointEnumerationCap);

    const SignInstance full{v, norm};
    const double full_mean = sign_mean_exact(full, SignTransform::identity());
    const double lhs = full_mean > 2.0 / p ? p / 4.0 : 0.0;

    double rhs = 0.0;
    const std::uint64_t subsets = std::uint64_t{1} << n;
    for (std::uint64_t mask = 1; mask < subsets; ++mask) {
        SignInstance sub{{}, norm};
        double weight = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if ((mask >> i) & 1u) {
                sub.vectors.push_back(v[i]);
                weight *= p;
            } else {
                weight *= 1.0 - p;
            }
        }
        if (weight == 0.0) continue;
        if (sign_mean_exact(sub, SignTransform::identity()) > 1.0) rhs += weight;
    }
    auto r = SlackReport::exact("removedelta", lhs, std::min(rhs, 1.0));
    r.note = "E||sum eps_i v_i|| = " + nlohmann::json(full_mean).dump();
    return r;
}

std::string_view to_string(ReductionRoute route) noexcept {
    return route == ReductionRoute::split ? "split" : "thin";
}

std::pair<double, double> reduction_constants(double kappa, double lambda, double alpha, ReductionRoute route) {
    if (route == ReductionRoute::split) {
        const double m = std::ceil(kappa);
        return {m * 16.0 / alpha, m * lambda * (1.0 + alpha)};
    }
    return {64.0 / alpha * kappa, 2.0 * (1.0 + alpha) * kappa * lambda};
}

DominationReport reduction_experiment(const std::vector<SourcePair>& pairs, double kappa, double lambda,
                                      double alpha, ReductionRoute route, const std::vector<Norm>& norms,
                                      const Estimator& estimator, StreamKey key) {
    check_pair_inputs(pairs, kappa, lambda, alpha);
    auto stages = certify_pairs(pairs, kappa, lambda, norms, estimator, key);

    // split keeps each X_i in one of ceil(kappa) pieces; thin keeps it with probability 1/kappa
    const double keep = route == ReductionRoute::split ? 1.0 / std::ceil(kappa) : 1.0 / kappa;
    std::vector<Source> thinned;
    for (const auto& pr : pairs) thinned.push_back(keep == 1.0 ? pr.first : thin(pr.first, keep));
    auto thinned_stages = certify_pairs(pairs, 1.0, lambda, norms, estimator, key, &thinned, "thinned pair");
    for (auto& s : thinned_stages) stages.push_back(std::move(s));

    DominationQuery piece{ProductLaw(thinned), ProductLaw(seconds(pairs)), 16.0 / alpha, (1.0 + alpha) * lambda,
                          norms, estimator, key.child("dominance.thinned_sum")};
    stages.push_back(labelled(check_domination(piece), "thinned sum"));

    const auto [k2, l2] = reduction_constants(kappa, lambda, alpha, route);
    DominationQuery q{ProductLaw(firsts(pairs)), ProductLaw(seconds(pairs)), k2, l2, norms, estimator,
                      key.child("dominance.sum")};
    auto report = labelled(check_domination(q), std::string("sum (") + std::string(to_string(route)) + ")");
    report.stages = std::move(stages);
    return report;
}

}  // namespace symdom
