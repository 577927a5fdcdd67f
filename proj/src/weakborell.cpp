#include "symdom/weakborell.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace symdom {

void WBParams::validate() const {
    if (!(C >= 1.0) || !std::isfinite(C)) throw ParameterError("WB: C must be >= 1");
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ParameterError("WB: delta must be > 0");
    if (!(theta > 0.0 && theta < 1.0)) throw ParameterError("WB: theta must lie in (0,1)");
}

WBParams wb_tensorize_constants(const WBParams& params) {
    params.validate();
    const double nine = std::pow(9.0, params.delta);
    return WBParams{12.0 * nine * params.C, params.delta,
                    std::min(params.theta / 2.0, 1.0 / (96.0 * params.C * nine))};
}

std::size_t WBReport::count(Verdict v) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [v](const WBRecord& r) { return r.verdict == v; }));
}

namespace {

WBReport check_once(const ProductLaw& law, const WBParams& params, const std::vector<Norm>& norms,
                    const std::vector<double>& grid, const Estimator& est, StreamKey key) {
    std::vector<double> thresholds{1.0};
    thresholds.insert(thresholds.end(), grid.begin(), grid.end());
    const auto cells = tail_probabilities(law, norms, thresholds, est, key);
    const std::size_t width = thresholds.size();

    WBReport report;
    report.params = params;
    report.method = tail_method(law, est);
    report.samples = report.method == TailMethod::monte_carlo ? est.samples : 0;
    bool any = false;
    for (std::size_t j = 0; j < norms.size(); ++j) {
        const TailEstimate& p1 = cells[j * width];
        const std::string id = norms[j].describe();
        if (!(p1.upper < params.theta)) {
            report.skipped.push_back(
                {id, p1, p1.lower >= params.theta ? "premise fails: P(||X|| > 1) >= theta" : "premise uncertain"});
            continue;
        }
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const double lambda = grid[g];
            const TailEstimate& pl = cells[j * width + 1 + g];
            const double factor = params.C * std::pow(lambda, -params.delta);
            WBRecord rec{id, lambda, p1, pl, factor * p1.value, Verdict::holds};
            if (lambda == 1.0)
                rec.verdict = Verdict::holds;
            else if (p1.exact && pl.exact)
                rec.verdict = exact_leq(pl.value, rec.bound) ? Verdict::holds : Verdict::violated;
            else if (pl.lower > factor * p1.upper)
                rec.verdict = Verdict::violated;
            else if (pl.upper <= factor * p1.lower)
                rec.verdict = Verdict::holds;
            else
                rec.verdict = Verdict::inconclusive;
            report.verdict = worst(report.verdict, rec.verdict);
            report.records.push_back(std::move(rec));
            any = true;
        }
    }
    if (!any) report.verdict = Verdict::inconclusive;
    return report;
}

}  // namespace

WBReport check_wb(const ProductLaw& law, const WBParams& params, const std::vector<Norm>& norms,
                  const std::vector<double>& lambda_grid, const WBOptions& options, StreamKey key) {
    params.validate();
    options.estimator.validate();
    if (lambda_grid.empty()) throw ParameterError("WB: the lambda grid is empty");
    for (double l : lambda_grid)
        if (!(l >= 1.0) || !std::isfinite(l)) throw ParameterError("WB: every lambda must be >= 1");
    if (norms.empty()) throw ParameterError("WB: the norm family is empty");
    for (const auto& n : norms)
        if (n.dimension() != law.dimension()) throw ParameterError("WB: norm/law dimension mismatch");
    if (options.escalation_cap > kMaxEscalatedSamples)
        throw ParameterError("WB: escalation cap exceeds 1e8 samples");

    Estimator est = options.estimator;
    WBReport report = check_once(law, params, norms, lambda_grid, est, key);
    std::uint64_t level = 0;
    while (report.method == TailMethod::monte_carlo && report.count(Verdict::inconclusive) > 0 &&
           est.samples * 10 <= options.escalation_cap) {
        est.samples *= 10;
        report = check_once(law, params, norms, lambda_grid, est, key.child("weakborell.escalate", ++level));
    }
    return report;
}

bool RecursionTable::all_hold() const noexcept {
    return std::all_of(rows.begin(), rows.end(), [](const RecursionRow& r) { return r.holds; });
}

RecursionTable recursion_bound(double p0, const WBParams& params, int K) {
    params.validate();
    if (!(p0 > 0.0 && p0 < 1.0)) throw ParameterError("recursion: p0 must lie in (0,1)");
    if (K < 0) throw ParameterError("recursion: K must be >= 0");
    RecursionTable t;
    t.p0 = p0;
    t.params = params;
    t.tensorized = wb_tensorize_constants(params);
    const double C = params.C;
    const double d = params.delta;
    t.threshold = 1.0 / (96.0 * C * std::pow(9.0, d));
    t.asserted = p0 <= t.threshold;
    t.gate = p0 < std::min(1.0 / 3.0, t.tensorized.theta);
    double prev = p0;
    for (int k = 0; k <= K; ++k) {
        RecursionRow row;
        row.k = k;
        row.recursive = k == 0 ? p0 : 6.0 * C * std::pow(3.0, -d * (k - 1)) * p0 + 4.0 * prev * prev;
        row.closed_form = 12.0 * std::pow(3.0, d) * C * std::pow(3.0, -k * d) * p0;
        row.multiplier = 0.5 + 48.0 * C * std::pow(3.0, -d * k + 3.0 * d) * p0;
        row.holds = exact_leq(row.recursive, row.closed_form);
        prev = row.recursive;
        t.rows.push_back(row);
    }
    return t;
}

WBReport wb_sum_experiment(const std::vector<Source>& components, const WBParams& params,
                           const std::vector<Norm>& norms, const std::vector<double>& lambda_grid,
                           const WBOptions& options, StreamKey key) {
    if (components.empty()) throw ParameterError("WB sum: need at least one component");
    std::vector<WBReport> stages;
    for (std::size_t i = 0; i < components.size(); ++i) {
        auto r = check_wb(ProductLaw{components[i]}, params, norms, lambda_grid, options,
                          key.child("weakborell.component", i));
        r.label = "component " + std::to_string(i);
        if (r.verdict == Verdict::violated) {
            for (const auto& rec : r.records)
                if (rec.verdict == Verdict::violated) {
                    std::ostringstream os;
                    os << "component " << i << " does not satisfy WB(" << params.C << "," << params.delta << ","
                       << params.theta << ") under norm " << rec.norm_id << " at lambda " << rec.lambda;
                    throw PreconditionError(os.str());
                }
        }
        stages.push_back(std::move(r));
    }
    auto report = check_wb(ProductLaw(components), wb_tensorize_constants(params), norms, lambda_grid, options,
                           key.child("weakborell.sum"));
    report.label = "sum";
    report.stages = std::move(stages);
    return report;
}

namespace {

nlohmann::json tail_json(const TailEstimate& e) {
    nlohmann::json j{{"value", e.value}, {"exact", e.exact}};
    if (!e.exact) {
        j["lower"] = e.lower;
        j["upper"] = e.upper;
        j["hits"] = e.hits;
    }
    return j;
}

}  // namespace

nlohmann::json to_json(const WBParams& p) { return {{"C", p.C}, {"delta", p.delta}, {"theta", p.theta}}; }

nlohmann::json to_json(const WBReport& r) {
    nlohmann::json j;
    if (!r.label.empty()) j["label"] = r.label;
    j["params"] = to_json(r.params);
    j["method"] = std::string(to_string(r.method));
    if (r.samples) j["samples"] = r.samples;
    j["verdict"] = std::string(to_string(r.verdict));
    j["counts"] = {{"holds", r.count(Verdict::holds)},
                   {"inconclusive", r.count(Verdict::inconclusive)},
                   {"violated", r.count(Verdict::violated)}};
    auto& recs = j["records"] = nlohmann::json::array();
    for (const auto& rec : r.records)
        recs.push_back({{"norm", rec.norm_id},
                        {"lambda", rec.lambda},
                        {"p1", tail_json(rec.p1)},
                        {"plambda", tail_json(rec.plambda)},
                        {"bound", rec.bound},
                        {"verdict", std::string(to_string(rec.verdict))}});
    auto& sk = j["skipped"] = nlohmann::json::array();
    for (const auto& s : r.skipped) sk.push_back({{"norm", s.norm_id}, {"p1", tail_json(s.p1)}, {"reason", s.reason}});
    if (!r.stages.empty()) {
        auto& st = j["stages"] = nlohmann::json::array();
        for (const auto& s : r.stages) st.push_back(to_json(s));
    }
    return j;
}

nlohmann::json to_json(const RecursionTable& t) {
    nlohmann::json j;
    j["p0"] = t.p0;
    j["params"] = to_json(t.params);
    j["tensorized"] = to_json(t.tensorized);
    j["threshold"] = t.threshold;
    j["asserted"] = t.asserted;
    j["gate"] = t.gate;
    j["all_hold"] = t.all_hold();
    auto& rows = j["rows"] = nlohmann::json::array();
    for (const auto& r : t.rows)
        rows.push_back({{"k", r.k},
                        {"recursive", r.recursive},
                        {"closed_form", r.closed_form},
                        {"multiplier", r.multiplier},
                        {"holds", r.holds}});
    return j;
}

std::string wb_csv(const WBReport& r) {
    std::ostringstream os;
    os << "norm_id,lambda,ratio,bound_factor,verdict\n";
    char buf[256];
    for (const auto& rec : r.records) {
        const double ratio = rec.p1.value > 0 ? rec.plambda.value / rec.p1.value : 0.0;
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", rec.lambda, ratio,
                      r.params.C * std::pow(rec.lambda, -r.params.delta));
        os << '"' << rec.norm_id << "\"," << buf << ',' << to_string(rec.verdict) << '\n';
    }
    return os.str();
}

std::string recursion_csv(const RecursionTable& t) {
    std::ostringstream os;
    os << "k,recursive,closed_form,multiplier,holds\n";
    char buf[256];
    for (const auto& r : t.rows) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%d", r.k, r.recursive, r.closed_form, r.multiplier,
                      r.holds ? 1 : 0);
        os << buf << '\n';
    }
    return os.str();
}

}  // namespace symdom
