#include "symdom/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include "symdom/dominance.hpp"
#include "symdom/fixtures.hpp"
#include "symdom/inequalities.hpp"
#include "symdom/majorisation.hpp"
#include "symdom/parallel.hpp"
#include "symdom/weakborell.hpp"

#ifndef SYMDOM_VERSION
#define SYMDOM_VERSION "0.0.0"
#endif

namespace symdom {

std::string version() { return SYMDOM_VERSION; }

void VerdictTally::add(Verdict v) noexcept {
    switch (v) {
        case Verdict::holds: ++holds; break;
        case Verdict::inconclusive: ++inconclusive; break;
        case Verdict::violated: ++violated; break;
    }
}

int exit_code_for(ExperimentKind kind, const VerdictTally& tally) noexcept {
    if (tally.violated > 0) return 2;
    if (kind != ExperimentKind::tail && tally.holds == 0) return 3;
    return 0;
}

std::string config_digest(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

nlohmann::json estimator_json(const Estimator& e) {
    return {{"mode", std::string(to_string(e.mode))},
            {"samples", e.samples},
            {"confidence", e.confidence},
            {"enumeration_cap", e.enumeration_cap}};
}

nlohmann::json tail_json(const TailEstimate& e) {
    nlohmann::json j{{"value", e.value}, {"exact", e.exact}};
    if (!e.exact) {
        j["lower"] = e.lower;
        j["upper"] = e.upper;
        j["hits"] = e.hits;
        j["samples"] = e.samples;
    }
    return j;
}

class Run {
public:
    explicit Run(const ExperimentConfig& c) : c_(c) {}

    StreamKey key(const std::string& op, std::uint64_t index = 0) {
        const StreamKey k = StreamKey{c_.seed}.child("run." + op, index);
        out_.seeds.push_back({index ? op + "[" + std::to_string(index) + "]" : op, k.stream});
        return k;
    }

    void data(std::string name, std::string contents) {
        if (c_.csv) out_.data_files.emplace_back(std::move(name), std::move(contents));
    }

    void tally(const DominationReport& r) {
        for (const auto& rec : r.records) out_.tally.add(rec.verdict);
        for (const auto& s : r.stages) tally(s);
    }

    void tally(const WBReport& r) {
        for (const auto& rec : r.records) out_.tally.add(rec.verdict);
        for (const auto& s : r.stages) tally(s);
    }

    RunResult finish(nlohmann::json result) {
        nlohmann::json& rep = out_.report;
        rep["kind"] = std::string(to_string(c_.kind));
        rep["version"] = version();
        rep["seed"] = c_.seed;
        rep["estimator"] = estimator_json(c_.estimator);
        if (!c_.norms.empty()) rep["norm_family"] = family_to_json(c_.norms);
        rep["result"] = std::move(result);
        const auto& t = out_.tally;
        std::string overall = t.violated ? "violated" : t.holds ? "holds" : t.inconclusive ? "inconclusive" : "none";
        if (t.holds && t.inconclusive && !t.violated) overall = "holds (some inconclusive)";
        rep["summary"] = {{"holds", t.holds},
                          {"inconclusive", t.inconclusive},
                          {"violated", t.violated},
                          {"verdict", overall}};
        if (c_.kind == ExperimentKind::counterexample) rep["expected_violation"] = c_.expected_violation;
        out_.exit_code = exit_code_for(c_.kind, t);
        rep["exit_code"] = out_.exit_code;
        return std::move(out_);
    }

    RunResult run();

private:
    nlohmann::json tail();
    nlohmann::json domination();
    nlohmann::json tensorize();
    nlohmann::json wb(bool sum);
    nlohmann::json majorize();
    nlohmann::json schur();
    nlohmann::json counterexample();
    nlohmann::json suite();
    nlohmann::json recursion();

    const ExperimentConfig& c_;
    RunResult out_;
};

RunResult Run::run() {
    if (c_.norm_family_seed) out_.seeds.push_back({"norm_family", c_.norm_family_seed});
    switch (c_.kind) {
        case ExperimentKind::tail: return finish(tail());
        case ExperimentKind::domination: return finish(domination());
        case ExperimentKind::tensorize: return finish(tensorize());
        case ExperimentKind::wb: return finish(wb(false));
        case ExperimentKind::wb_sum: return finish(wb(true));
        case ExperimentKind::majorize: return finish(majorize());
        case ExperimentKind::schur: return finish(schur());
        case ExperimentKind::counterexample: return finish(counterexample());
        case ExperimentKind::inequality_suite: return finish(suite());
        case ExperimentKind::recursion: return finish(recursion());
    }
    throw std::logic_error("unhandled experiment kind");
}

nlohmann::json Run::tail() {
    const ProductLaw law(c_.law);
    const auto cells = tail_probabilities(law, c_.norms, c_.thresholds, c_.estimator, key("tail"));
    nlohmann::json rows = nlohmann::json::array();
    std::ostringstream csv;
    csv << "norm_id,threshold,value,lower,upper,exact\n";
    for (std::size_t j = 0; j < c_.norms.size(); ++j)
        for (std::size_t k = 0; k < c_.thresholds.size(); ++k) {
            const auto& e = cells[j * c_.thresholds.size() + k];
            rows.push_back({{"norm", c_.norms[j].describe()}, {"threshold", c_.thresholds[k]}, {"tail", tail_json(e)}});
            csv << csv_field(c_.norms[j].describe()) << ',' << g17(c_.thresholds[k]) << ',' << g17(e.value) << ','
                << g17(e.lower) << ',' << g17(e.upper) << ',' << (e.exact ? 1 : 0) << '\n';
        }
    data("tail.csv", csv.str());
    return {{"method", std::string(to_string(tail_method(law, c_.estimator)))}, {"cells", rows}};
}

nlohmann::json Run::domination() {
    DominationQuery q{ProductLaw(c_.x), ProductLaw(c_.y), c_.kappa, c_.lambda, c_.norms, c_.estimator,
                      key("domination")};
    const auto r = check_domination(q);
    tally(r);
    data("scatter.csv", scatter_csv(r));
    return to_json(r);
}

nlohmann::json Run::tensorize() {
    DominationReport r;
    nlohmann::json extra;
    if (c_.route == TensorizeRoute::direct) {
        r = tensorisation_experiment(c_.pairs, c_.kappa, c_.lambda, c_.alpha, c_.norms, c_.estimator, key("tensorize"));
        const auto [k2, l2] = tensorisation_constants(c_.kappa, c_.lambda, c_.alpha);
        extra = {{"route", "direct"}, {"kappa_prime", k2}, {"lambda_prime", l2}};
    } else {
        const auto route = c_.route == TensorizeRoute::split ? ReductionRoute::split : ReductionRoute::thin;
        r = reduction_experiment(c_.pairs, c_.kappa, c_.lambda, c_.alpha, route, c_.norms, c_.estimator,
                                 key("reduction"));
        const auto [k2, l2] = reduction_constants(c_.kappa, c_.lambda, c_.alpha, route);
        extra = {{"route", std::string(to_string(route))}, {"kappa_prime", k2}, {"lambda_prime", l2}};
    }
    tally(r);
    data("scatter.csv", scatter_csv(r));
    nlohmann::json j = to_json(r);
    j["constants"] = extra;
    j["pairs"] = c_.pairs.size();
    return j;
}

nlohmann::json Run::wb(bool sum) {
    WBOptions opt{c_.estimator, c_.escalation_cap};
    WBReport r = sum ? wb_sum_experiment(c_.law, c_.wb, c_.norms, c_.lambdas, opt, key("wb_sum"))
                     : check_wb(ProductLaw(c_.law), c_.wb, c_.norms, c_.lambdas, opt, key("wb"));
    tally(r);
    data("wb.csv", wb_csv(r));
    nlohmann::json j = to_json(r);
    if (sum) j["input_params"] = to_json(c_.wb);
    return j;
}

nlohmann::json Run::majorize() {
    const auto d = decompose_detailed(c_.a, c_.b);
    const auto rec = d.mixture.reconstruct(c_.b);
    double err = 0.0;
    for (std::size_t i = 0; i < rec.size(); ++i) err = std::max(err, std::abs(rec[i] - c_.a[i]));
    const double total = d.mixture.total_weight();
    const std::size_t n = c_.a.size();
    bool weights_ok = std::abs(total - 1.0) <= 1e-12;
    for (const auto& t : d.mixture.terms) weights_ok = weights_ok && t.weight >= -1e-12;
    const bool ok = err <= 1e-9 && weights_ok && d.mixture.terms.size() <= (n - 1) * (n - 1) + 1;
    out_.tally.add(ok ? Verdict::holds : Verdict::violated);

    nlohmann::json chain = nlohmann::json::array();
    for (const auto& t : d.chain) chain.push_back({{"j", t.j}, {"k", t.k}, {"t", t.t}});
    nlohmann::json j{{"a", c_.a},
                     {"b", c_.b},
                     {"mixture", to_json(d.mixture)},
                     {"chain", chain},
                     {"matrix", d.matrix},
                     {"reconstruction_error", err},
                     {"weight_total", total},
                     {"birkhoff_residual", d.residual},
                     {"decomposition_verdict", ok ? "holds" : "violated"}};
    if (c_.weighted) {
        const auto& w = *c_.weighted;
        const auto r = weighted_domination_experiment(c_.a, c_.b, w.source, w.params, c_.norms, c_.estimator,
                                                      key("weighted_domination"), w.exploratory);
        if (!r.exploratory) {
            tally(r.report);
            tally(r.certification);
        }
        data("scatter.csv", scatter_csv(r.report));
        j["domination"] = {{"kappa", r.kappa},
                           {"kappa_expanded", r.kappa_expanded},
                           {"kappa_compact", r.kappa_compact},
                           {"lambda", r.lambda},
                           {"exploratory", r.exploratory},
                           {"source", w.source.describe()},
                           {"params", to_json(w.params)},
                           {"certification", to_json(r.certification)},
                           {"report", to_json(r.report)}};
    }
    return j;
}

nlohmann::json Run::schur() {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < c_.norms.size(); ++i) {
        auto r = schur_convexity_check(c_.a, c_.b, *c_.source, c_.norms[i], c_.transform, c_.estimator,
                                       key("schur", i + 1));
        out_.tally.add(r.verdict);
        auto j = to_json(r);
        j["norm"] = c_.norms[i].describe();
        rows.push_back(j);
    }
    return {{"a", c_.a}, {"b", c_.b}, {"source", c_.source->describe()}, {"checks", rows}};
}

nlohmann::json Run::counterexample() {
    const auto t = counterexample_experiment(c_.delta, c_.n_grid, c_.kappa, c_.lambda, c_.estimator,
                                             key("counterexample"));
    for (const auto& row : t.rows)
        if (row.n > 1) out_.tally.add(row.witness ? Verdict::violated : Verdict::holds);
    data("counterexample.csv", counterexample_csv(t));
    return to_json(t);
}

nlohmann::json Run::recursion() {
    const auto t = recursion_bound(c_.p0, c_.wb, c_.K);
    for (const auto& r : t.rows)
        out_.tally.add(r.holds ? Verdict::holds : t.asserted ? Verdict::violated : Verdict::inconclusive);
    data("recursion.csv", recursion_csv(t));
    return to_json(t);
}

nlohmann::json Run::suite() {
    const SuiteSpec& s = c_.suite;
    std::vector<SlackReport> reports;
    std::vector<std::string> instance_ids;
    auto push = [&](SlackReport r, const std::string& id) {
        reports.push_back(std::move(r));
        instance_ids.push_back(id);
    };

    RandomStream rs(key("suite.instances"), 0);
    const std::size_t L = s.levels.size();
    {
        const SignInstance equality{{{1.0}, {1.0}, {1.0}}, Norm::lp(1, 2.0)};
        push(verify_kahane(equality, 1.0, 1.0), "kahane-equality");
        push(verify_l1_l2(SignInstance{{{1.0}, {1.0}}, Norm::lp(1, 2.0)}), "l1l2-equality");
    }
    for (std::size_t i = 0; i < s.sign_instances; ++i) {
        const auto inst = fixtures::random_sign_instance(rs, s.max_n, s.max_dim);
        const std::string id = "sign-" + std::to_string(i);
        push(verify_kahane(inst, s.levels[fixtures::uniform_index(rs, L)], s.levels[fixtures::uniform_index(rs, L)]),
             id);
        push(verify_l1_l2(inst), id);
        for (double theta : s.thetas) push(verify_paley_zygmund(inst, theta), id);
        std::vector<double> a(inst.size()), b(inst.size());
        for (std::size_t k = 0; k < inst.size(); ++k) {
            b[k] = fixtures::coordinate(rs);
            a[k] = b[k] * (2.0 * rs.uniform() - 1.0);
        }
        push(verify_contraction(inst.vectors, a, b, inst.norm), id);
    }
    for (std::size_t i = 0; i < s.sum_laws; ++i) {
        const auto law = fixtures::random_finite_law(rs, s.max_components, s.max_dim, 3);
        const Norm norm = fixtures::random_norm(rs, law.dimension());
        const SumLevels lv{s.levels[fixtures::uniform_index(rs, L)], s.levels[fixtures::uniform_index(rs, L)],
                           s.levels[fixtures::uniform_index(rs, L)]};
        Estimator exact = c_.estimator;
        exact.mode = Estimator::Mode::exact;
        for (auto& r : verify_sum_inequalities(law, norm, lv, exact).all()) push(std::move(r), "sum-" + std::to_string(i));
    }
    for (std::size_t i = 0; i < s.sandwich_laws; ++i) {
        const auto law = fixtures::random_finite_law(rs, 5, s.max_dim, 3);
        const Norm norm = fixtures::random_norm(rs, law.dimension());
        for (double alpha : s.alphas) {
            const auto r = proxy_bound_check(law, norm, alpha);
            push(r.lower, "sandwich-" + std::to_string(i));
            push(r.upper, "sandwich-" + std::to_string(i));
        }
    }
    for (std::size_t i = 0; i < s.removedelta_instances; ++i) {
        const std::size_t n = 1 + fixtures::uniform_index(rs, 10);
        const std::size_t dim = 1 + fixtures::uniform_index(rs, s.max_dim);
        const Norm norm = fixtures::random_norm(rs, dim);
        const double scale = 1.0 + 19.0 * rs.uniform();
        std::vector<Vector> v(n, Vector(dim));
        for (auto& x : v)
            for (auto& c : x) c = scale * fixtures::coordinate(rs);
        for (double p : s.ps) push(removedelta_check(v, norm, p), "removedelta-" + std::to_string(i));
    }

    struct Summary {
        std::size_t checked = 0, skipped = 0, holds = 0, violated = 0, inconclusive = 0, tight = 0;
        double min_slack = std::numeric_limits<double>::infinity();
    };
    std::map<std::string, Summary> by_name;
    std::map<std::string, std::vector<std::size_t>> histogram;
    constexpr std::size_t kBins = 20;
    std::ostringstream lines;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        auto j = to_json(r);
        j["instance"] = instance_ids[i];
        lines << j.dump() << '\n';
        auto& sm = by_name[r.name];
        if (r.skipped) {
            ++sm.skipped;
            continue;
        }
        ++sm.checked;
        out_.tally.add(r.verdict);
        if (r.verdict == Verdict::holds) ++sm.holds;
        if (r.verdict == Verdict::violated) ++sm.violated;
        if (r.verdict == Verdict::inconclusive) ++sm.inconclusive;
        sm.min_slack = std::min(sm.min_slack, r.slack);
        const double denom = std::max(std::abs(r.lhs), std::abs(r.rhs));
        const double rel = denom > 0 ? r.slack / denom : 0.0;
        if (std::abs(r.slack) <= kExactRelativeTolerance * denom + 1e-15) ++sm.tight;
        auto& h = histogram[r.name];
        h.resize(kBins + 1, 0);
        if (rel < 0) ++h[kBins];
        else ++h[std::min(kBins - 1, static_cast<std::size_t>(rel * kBins))];
    }
    data("inequalities.jsonl", lines.str());
    std::ostringstream hist;
    hist << "inequality,bin_lower,bin_upper,count\n";
    for (const auto& [name, h] : histogram) {
        for (std::size_t b = 0; b < kBins; ++b)
            hist << name << ',' << g17(static_cast<double>(b) / kBins) << ',' << g17(static_cast<double>(b + 1) / kBins)
                 << ',' << h[b] << '\n';
        hist << name << ",-inf,0," << h[kBins] << '\n';
    }
    data("slack_histogram.csv", hist.str());

    nlohmann::json summary = nlohmann::json::object();
    for (const auto& [name, sm] : by_name)
        summary[name] = {{"checked", sm.checked},
                         {"skipped", sm.skipped},
                         {"holds", sm.holds},
                         {"inconclusive", sm.inconclusive},
                         {"violated", sm.violated},
                         {"tight", sm.tight},
                         {"min_slack", sm.checked ? nlohmann::json(sm.min_slack) : nlohmann::json(nullptr)}};
    return {{"reports", reports.size()}, {"by_inequality", summary}};
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

RunResult execute(const ExperimentConfig& config) { return Run(config).run(); }

void write_outputs(const ExperimentConfig& config, const RunResult& result, const std::filesystem::path& dir,
                   double wall_seconds) {
    std::filesystem::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& contents) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
        out << contents;
    };
    write("report.json", result.report.dump(2) + "\n");
    std::vector<std::string> files{"report.json"};
    for (const auto& [name, contents] : result.data_files) {
        write(name, contents);
        files.push_back(name);
    }
    nlohmann::json seeds = nlohmann::json::array();
    for (const auto& s : result.seeds) seeds.push_back({{"operation", s.operation}, {"stream", s.stream}});
    nlohmann::json manifest{{"version", version()},
                            {"config", config.origin},
                            {"config_digest", config_digest(config.text)},
                            {"kind", std::string(to_string(config.kind))},
                            {"seed", config.seed},
                            {"threads", parallel::threads()},
                            {"finished_utc", utc_now()},
                            {"wall_clock_seconds", wall_seconds},
                            {"seeds", seeds},
                            {"summary", result.report.at("summary")},
                            {"exit_code", result.exit_code},
                            {"files", files}};
    write("manifest.json", manifest.dump(2) + "\n");
}

}  // namespace symdom
