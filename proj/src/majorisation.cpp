#include "symdom/majorisation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>

#include "symdom/parallel.hpp"

namespace symdom {

namespace {

std::vector<double> decreasing(std::vector<double> v) {
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

/// Indices that sort v decreasingly (stable).
std::vector<std::size_t> decreasing_order(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v[i] > v[j]; });
    return idx;
}

void check_pair(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw ParameterError("majorisation: a and b must have equal length");
    if (a.empty()) throw ParameterError("majorisation: sequences must be nonempty");
    for (double x : a)
        if (!std::isfinite(x)) throw ParameterError("majorisation: non-finite entry in a");
    for (double x : b)
        if (!std::isfinite(x)) throw ParameterError("majorisation: non-finite entry in b");
}

}  // namespace

std::optional<std::size_t> majorisation_violation(const std::vector<double>& a, const std::vector<double>& b,
                                                  double tol) {
    check_pair(a, b);
    const auto as = decreasing(a);
    const auto bs = decreasing(b);
    double sa = 0.0;
    double sb = 0.0;
    for (std::size_t k = 0; k < as.size(); ++k) {
        sa += as[k];
        sb += bs[k];
        if (k + 1 < as.size()) {
            if (sa > sb + tol) return k;
        } else if (std::abs(sa - sb) > tol) {
            return k;
        }
    }
    return std::nullopt;
}

bool is_majorised(const std::vector<double>& a, const std::vector<double>& b, double tol) {
    return !majorisation_violation(a, b, tol).has_value();
}

void require_majorised(const std::vector<double>& a, const std::vector<double>& b, double tol) {
    if (const auto k = majorisation_violation(a, b, tol)) {
        const bool total = *k + 1 == a.size();
        throw NotMajorisedError(total ? "a is not majorised by b: total sums differ"
                                      : "a is not majorised by b: partial sum " + std::to_string(*k + 1) +
                                            " of a exceeds that of b",
                                *k);
    }
}

std::vector<double> PermutationMixture::reconstruct(const std::vector<double>& b) const {
    if (b.size() != n) throw ParameterError("mixture: b has the wrong length");
    std::vector<double> out(n, 0.0);
    for (const auto& t : terms)
        for (std::size_t i = 0; i < n; ++i) out[i] += t.weight * b[t.permutation[i]];
    return out;
}

double PermutationMixture::total_weight() const noexcept {
    double s = 0.0;
    for (const auto& t : terms) s += t.weight;
    return s;
}

namespace {

constexpr double kSupportFloor = 1e-12;

/// Kuhn augmenting path from row i; rows with a fixed column are never rerouted.
bool augment(std::size_t i, const std::vector<std::vector<double>>& m, std::vector<int>& row_of_col,
             std::vector<char>& seen, const std::vector<int>& fixed_col) {
    const std::size_t n = m.size();
    for (std::size_t j = 0; j < n; ++j) {
        if (m[i][j] <= kSupportFloor || seen[j]) continue;
        seen[j] = 1;
        const int r = row_of_col[j];
        if (r >= 0 && fixed_col[static_cast<std::size_t>(r)] >= 0) continue;
        if (r < 0 || augment(static_cast<std::size_t>(r), m, row_of_col, seen, fixed_col)) {
            row_of_col[j] = static_cast<int>(i);
            return true;
        }
    }
    return false;
}

/// Whether rows [from, n) can be perfectly matched to columns not taken by fixed rows.
bool completable(const std::vector<std::vector<double>>& m, const std::vector<int>& fixed_col, std::size_t from) {
    const std::size_t n = m.size();
    std::vector<int> row_of_col(n, -1);
    for (std::size_t i = 0; i < from; ++i) row_of_col[static_cast<std::size_t>(fixed_col[i])] = static_cast<int>(i);
    for (std::size_t i = from; i < n; ++i) {
        std::vector<char> seen(n, 0);
        if (!augment(i, m, row_of_col, seen, fixed_col)) return false;
    }
    return true;
}

/// Lexicographically smallest perfect matching on the positive support.
std::optional<std::vector<std::size_t>> smallest_matching(const std::vector<std::vector<double>>& m) {
    const std::size_t n = m.size();
    std::vector<int> fixed_col(n, -1);
    std::vector<char> used(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        bool placed = false;
        for (std::size_t j = 0; j < n && !placed; ++j) {
            if (used[j] || m[i][j] <= kSupportFloor) continue;
            fixed_col[i] = static_cast<int>(j);
            used[j] = 1;
            if (completable(m, fixed_col, i + 1)) {
                placed = true;
            } else {
                fixed_col[i] = -1;
                used[j] = 0;
            }
        }
        if (!placed) return std::nullopt;
    }
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<std::size_t>(fixed_col[i]);
    return perm;
}

}  // namespace

Decomposition decompose_detailed(const std::vector<double>& a, const std::vector<double>& b) {
    require_majorised(a, b);
    const std::size_t n = a.size();
    const auto pa = decreasing_order(a);
    const auto pb = decreasing_order(b);
    std::vector<double> x(n);  // target a*
    std::vector<double> c(n);  // current, starts at b*
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = a[pa[i]];
        c[i] = b[pb[i]];
    }

    Decomposition out;
    std::vector<std::vector<double>> T(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) T[i][i] = 1.0;

    const double scale = std::max(1.0, std::abs(c.front()) + std::abs(c.back()));
    const double eps = 1e-13 * scale;
    for (std::size_t step = 0; step < 2 * n; ++step) {
        std::optional<std::size_t> j;
        for (std::size_t i = n; i-- > 0;)
            if (x[i] < c[i] - eps) {
                j = i;
                break;
            }
        if (!j) break;
        std::optional<std::size_t> k;
        for (std::size_t i = *j + 1; i < n; ++i)
            if (x[i] > c[i] + eps) {
                k = i;
                break;
            }
        if (!k) break;
        const double d = std::min(c[*j] - x[*j], x[*k] - c[*k]);
        const double s = d / (c[*j] - c[*k]);  // weight of the swap
        const double t = 1.0 - s;
        // rows j and k of T become t row + s swapped row
        for (std::size_t col = 0; col < n; ++col) {
            const double rj = T[*j][col];
            const double rk = T[*k][col];
            T[*j][col] = t * rj + s * rk;
            T[*k][col] = s * rj + t * rk;
        }
        const double cj = c[*j];
        const double ck = c[*k];
        c[*j] = t * cj + s * ck;
        c[*k] = s * cj + t * ck;
        // snap the coordinate that reached its target
        if (c[*j] - x[*j] <= x[*k] - c[*k]) c[*j] = x[*j];
        else c[*k] = x[*k];
        out.chain.push_back({*j, *k, t});
        out.steps.push_back(c);
    }

    out.matrix.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.matrix[pa[i]][pb[j]] = T[i][j];

    auto residual = out.matrix;
    out.mixture.n = n;
    const std::size_t max_terms = (n - 1) * (n - 1) + 1;
    while (out.mixture.terms.size() < max_terms) {
        double left = 0.0;
        for (const auto& row : residual)
            for (double v : row) left = std::max(left, v);
        if (left <= 1e-10) break;
        const auto perm = smallest_matching(residual);
        if (!perm) break;
        double w = 1.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (residual[i][(*perm)[i]] < w) {
                w = residual[i][(*perm)[i]];
                arg = i;
            }
        for (std::size_t i = 0; i < n; ++i) residual[i][(*perm)[i]] -= w;
        residual[arg][(*perm)[arg]] = 0.0;
        out.mixture.terms.push_back({*perm, w});
    }
    out.residual = 0.0;
    for (const auto& row : residual)
        for (double v : row) out.residual = std::max(out.residual, v);
    const double total = out.mixture.total_weight();
    for (auto& t : out.mixture.terms) t.weight /= total;
    return out;
}

PermutationMixture decompose(const std::vector<double>& a, const std::vector<double>& b) {
    return decompose_detailed(a, b).mixture;
}

nlohmann::json to_json(const PermutationMixture& m) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : m.terms) terms.push_back({{"permutation", t.permutation}, {"weight", t.weight}});
    return {{"n", m.n}, {"terms", terms}};
}

// Weighted sums ------------------------------------------------------------------

namespace {

ProductLaw weighted_law(const std::vector<double>& w, const Source& source) {
    std::vector<Source> parts;
    for (double x : w) parts.push_back(x == 1.0 ? source : Source::scaled(source, x));
    return ProductLaw(std::move(parts));
}

struct MeanResult {
    double value = 0.0;
    Interval ci{};
    bool exact = true;
};

MeanResult transformed_mean(const ProductLaw& law, const Norm& norm, SignTransform f, const Estimator& est,
                            StreamKey key) {
    const TailMethod method = tail_method(law, est);
    if (method == TailMethod::enumeration) {
        const auto pts = exact_sum(law, est.enumeration_cap);
        double m = 0.0;
        for (std::size_t i = 0; i < pts->size(); ++i) m += pts->weights[i] * f(norm.evaluate(pts->point(i)));
        return {m, {m, m}, true};
    }
    const std::size_t n = law.size();
    const std::size_t dim = law.dimension();
    const std::uint64_t chunks = parallel::chunk_count(est.samples);
    std::vector<std::pair<double, double>> partial(chunks);
    parallel::for_each_index(chunks, [&](std::uint64_t chunk) {
        RandomStream rs(key, static_cast<std::uint32_t>(chunk));
        std::vector<double> parts(n * dim);
        double s[kMaxDimension];
        double sum = 0.0;
        double sq = 0.0;
        const std::uint64_t len = parallel::chunk_length(est.samples, chunk);
        for (std::uint64_t r = 0; r < len; ++r) {
            law.sample_components(rs, parts.data());
            std::fill(s, s + dim, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < dim; ++k) s[k] += parts[i * dim + k];
            const double v = f(norm.evaluate(s));
            sum += v;
            sq += v * v;
        }
        partial[chunk] = {sum, sq};
    });
    double sum = 0.0;
    double sq = 0.0;
    for (const auto& [x, y] : partial) {
        sum += x;
        sq += y;
    }
    const double m = static_cast<double>(est.samples);
    const double mean = sum / m;
    const double var = m > 1 ? std::max(0.0, (sq - m * mean * mean) / (m - 1.0)) : 0.0;
    const double half = normal_two_sided_quantile(est.confidence) * std::sqrt(var / m);
    return {mean, {mean - half, mean + half}, false};
}

}  // namespace

SlackReport schur_convexity_check(const std::vector<double>& a, const std::vector<double>& b, const Source& source,
                                  const Norm& norm, SignTransform transform, const Estimator& estimator,
                                  StreamKey key) {
    require_majorised(a, b);
    estimator.validate();
    if (norm.dimension() != source.dimension()) throw ParameterError("schur check: norm/source dimension mismatch");
    const auto lhs = transformed_mean(weighted_law(a, source), norm, transform, estimator,
                                      key.child("majorisation.schur", 0));
    const auto rhs = transformed_mean(weighted_law(b, source), norm, transform, estimator,
                                      key.child("majorisation.schur", 1));
    if (lhs.exact && rhs.exact) return SlackReport::exact("schur_convexity", lhs.value, rhs.value);
    return SlackReport::monte_carlo("schur_convexity", lhs.value, lhs.ci, rhs.value, rhs.ci, estimator.samples,
                                    estimator.confidence);
}

double weighted_domination_kappa(const WBParams& params) {
    params.validate();
    if (!(params.delta > 1.0)) throw ParameterError("weighted domination: the constant needs delta > 1");
    const double nine = std::pow(9.0, params.delta);
    return std::max({2.0 / params.theta, 96.0 * params.C * nine, 12.0 * params.C * nine / (params.delta - 1.0)});
}

WeightedDominationResult weighted_domination_experiment(const std::vector<double>& a, const std::vector<double>& b,
                                                        const Source& source, const WBParams& params,
                                                        const std::vector<Norm>& norms, const Estimator& estimator,
                                                        StreamKey key, bool exploratory) {
    params.validate();
    if (params.delta < 1.0)
        throw ParameterError("weighted domination needs delta > 1; for delta < 1 run the counterexample experiment");
    if (params.delta == 1.0 && !exploratory)
        throw ParameterError("weighted domination at delta = 1 is only available as an exploratory run");
    require_majorised(a, b);

    WeightedDominationResult out;
    out.exploratory = params.delta == 1.0;
    const WBParams tp = wb_tensorize_constants(params);
    const double nine = std::pow(9.0, params.delta);
    if (out.exploratory) {
        out.kappa_expanded = std::max(2.0 / params.theta, 96.0 * params.C * nine);
        out.kappa_compact = 1.0 / tp.theta;
    } else {
        out.kappa_expanded = weighted_domination_kappa(params);
        out.kappa_compact = std::max(1.0 / tp.theta, tp.C / (params.delta - 1.0));
    }
    if (std::abs(out.kappa_expanded - out.kappa_compact) > 1e-12 * out.kappa_expanded)
        throw std::logic_error("weighted domination: the two forms of kappa disagree");
    out.kappa = out.kappa_expanded;

    WBOptions wb;
    wb.estimator = estimator;
    out.certification = check_wb(ProductLaw{source}, params, norms, default_lambda_grid(), wb,
                                 key.child("majorisation.certify"));
    out.certification.label = "source";
    if (out.certification.verdict == Verdict::violated)
        for (const auto& rec : out.certification.records)
            if (rec.verdict == Verdict::violated)
                throw PreconditionError("weighted domination: the source violates WB under norm " + rec.norm_id);

    DominationQuery q{weighted_law(a, source), weighted_law(b, source), out.kappa, out.lambda, norms, estimator,
                      key.child("majorisation.domination")};
    out.report = check_domination(q);
    out.report.label = out.exploratory ? "weighted sums (exploratory)" : "weighted sums";
    return out;
}

CounterexampleTable counterexample_experiment(double delta, const std::vector<std::uint64_t>& n_grid, double kappa,
                                              double lambda, const Estimator& estimator, StreamKey key) {
    if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("counterexample: delta must lie in (0,1)");
    if (!(kappa >= 1.0) || !(lambda >= 1.0)) throw ParameterError("counterexample: kappa, lambda must be >= 1");
    if (n_grid.empty()) throw ParameterError("counterexample: the n grid is empty");
    for (auto n : n_grid)
        if (n == 0) throw ParameterError("counterexample: n must be >= 1");
    estimator.validate();

    CounterexampleTable table;
    table.delta = delta;
    table.kappa = kappa;
    table.lambda = lambda;
    const ProductLaw law{Source::symmetric_stable(delta)};
    table.method = tail_method(law, estimator);

    std::vector<double> thresholds{1.0};
    for (auto n : n_grid) thresholds.push_back(std::pow(static_cast<double>(n), 1.0 / delta - 1.0) / lambda);
    const Norm abs = Norm::lp(1, 1.0);
    const auto cells = tail_probabilities(law, std::span<const Norm>(&abs, 1), thresholds, estimator,
                                          key.child("majorisation.counterexample"));
    const TailEstimate& lhs = cells[0];
    for (std::size_t g = 0; g < n_grid.size(); ++g) {
        CounterexampleRow row;
        row.n = n_grid[g];
        row.threshold = thresholds[g + 1];
        row.lhs = lhs;
        row.tail = cells[g + 1];
        row.rhs = kappa * row.tail.value;
        row.ratio = row.rhs > 0 ? lhs.value / row.rhs : std::numeric_limits<double>::infinity();
        if (row.n > 1) {
            if (lhs.exact && row.tail.exact)
                row.witness = !exact_leq(lhs.value, row.rhs);
            else
                row.witness = lhs.lower > kappa * row.tail.upper;
        }
        if (row.witness && (!table.witness || row.n < *table.witness)) table.witness = row.n;
        table.rows.push_back(row);
    }
    return table;
}

nlohmann::json to_json(const CounterexampleTable& t) {
    nlohmann::json j;
    j["delta"] = t.delta;
    j["kappa"] = t.kappa;
    j["lambda"] = t.lambda;
    j["method"] = std::string(to_string(t.method));
    j["witness"] = t.witness ? nlohmann::json(*t.witness) : nlohmann::json(nullptr);
    auto& rows = j["rows"] = nlohmann::json::array();
    for (const auto& r : t.rows) {
        nlohmann::json row{{"n", r.n},
                           {"threshold", r.threshold},
                           {"lhs", r.lhs.value},
                           {"rhs", r.rhs},
                           {"ratio", r.ratio},
                           {"witness", r.witness}};
        if (!r.tail.exact) {
            row["lhs_ci"] = {r.lhs.lower, r.lhs.upper};
            row["rhs_ci"] = {t.kappa * r.tail.lower, t.kappa * r.tail.upper};
        }
        rows.push_back(row);
    }
    return j;
}

std::string counterexample_csv(const CounterexampleTable& t) {
    std::ostringstream os;
    os << "n,threshold,lhs,rhs,ratio,witness\n";
    char buf[256];
    for (const auto& r : t.rows) {
        std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,%.17g,%.17g,%d", static_cast<unsigned long long>(r.n),
                      r.threshold, r.lhs.value, r.rhs, r.ratio, r.witness ? 1 : 0);
        os << buf << '\n';
    }
    return os.str();
}

}  // namespace symdom
