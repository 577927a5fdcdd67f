// Acceptance harness: one PASS/FAIL line per criterion. Exits 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "symdom/config.hpp"
#include "symdom/dominance.hpp"
#include "symdom/fixtures.hpp"
#include "symdom/inequalities.hpp"
#include "symdom/majorisation.hpp"
#include "symdom/parallel.hpp"
#include "symdom/runner.hpp"
#include "symdom/weakborell.hpp"

using namespace symdom;

namespace {

struct Check {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(int id, const char* title, double time_limit, const std::function<void(Check&)>& body) {
    Check out;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.require(secs < time_limit, "runtime limit " + std::to_string(time_limit) + " s");
    if (!out.pass) ++failures;
    std::printf("criterion %2d: %s  %s (%.2f s)%s\n", id, out.pass ? "PASS" : "FAIL", title, secs,
                out.detail.str().c_str());
    std::fflush(stdout);
}

Source rad(double m = 1.0) { return Source::finite(FiniteSupportDist::rademacher(m)); }
const Norm kAbs = Norm::lp(1, 2.0);

bool all_hold(const std::vector<SlackReport>& rs, std::size_t& count) {
    bool ok = true;
    for (const auto& r : rs) {
        if (r.skipped) continue;
        ++count;
        const bool good = r.method == SlackMethod::exact && r.verdict == Verdict::holds;
        if (!good) std::printf("    %s lhs=%.17g rhs=%.17g %s\n", r.name.c_str(), r.lhs, r.rhs, r.note.c_str());
        ok = ok && good;
    }
    return ok;
}

DominationReport gaussian_tensorisation() {
    RandomStream rs(StreamKey{2024}.child("acceptance.gaussian_pairs"), 0);
    const auto pairs = fixtures::gaussian_pairs(rs, 3, 2);
    NormFamilyMix mix;
    mix.scale_min = 0.5;
    mix.scale_max = 2.0;
    const auto family = random_norm_family(2024, 2, 50, mix);
    Estimator est;
    est.mode = Estimator::Mode::monte_carlo;
    est.samples = 1'000'000;
    est.confidence = 0.99;
    return tensorisation_experiment(pairs, 1.0, 1.0, 1.0, family, est, StreamKey{2024});
}

}  // namespace

int main() {
    parallel::set_threads(1);

    criterion(1, "exact oracles for three Rademacher signs", 2.0, [](Check& o) {
        const ProductLaw law{rad(), rad(), rad()};
        const SignInstance inst{{{1.0}, {1.0}, {1.0}}, kAbs};
        const double tail = sign_tail_exact(inst, 1.0);
        const double proxy = proxy_exact(law, kAbs).value;
        o.require(tail == 0.25, "sign tail == 0.25");
        o.require(proxy == 0.5, "proxy == 0.5");

        Estimator mc;
        mc.mode = Estimator::Mode::monte_carlo;
        mc.samples = 1'000'000;
        const std::vector<Norm> norms{kAbs};
        const std::vector<double> t{1.0};
        const double tail_mc = tail_probabilities(law, norms, t, mc, StreamKey{1}).front().value;
        const double proxy_mc_value = proxy_mc(law, kAbs, {1'000'000}, StreamKey{2}).value;
        o.require(std::abs(tail_mc - 0.25) <= 0.002, "MC tail within 0.002");
        o.require(std::abs(proxy_mc_value - 0.5) <= 0.002, "MC proxy within 0.002");
        o.detail << "tail=" << tail << " proxy=" << proxy << " mc_tail=" << tail_mc << " mc_proxy=" << proxy_mc_value;
    });

    criterion(2, "proxy sandwich on 200 random laws", 60.0, [](Check& o) {
        o.require(std::abs(proxy_upper_constant(0.125) - 16.0) <= 1e-12, "upper constant 16");
        RandomStream rs(StreamKey{2}.child("acceptance.sandwich"), 0);
        std::size_t checks = 0, bad = 0;
        for (int i = 0; i < 200; ++i) {
            const auto law = fixtures::random_finite_law(rs, 5, 3, 3);
            const Norm n = fixtures::random_norm(rs, law.dimension());
            for (double alpha : {0.25, 0.5, 1.0}) {
                const auto b = proxy_bound_check(law, n, alpha);
                for (const auto* r : {&b.lower, &b.upper}) {
                    ++checks;
                    if (r->verdict != Verdict::holds || r->method != SlackMethod::exact) ++bad;
                }
            }
        }
        o.require(bad == 0, "zero violations");
        o.detail << checks << " exact checks, " << bad << " violations";
    });

    criterion(3, "classical inequality suite", 120.0, [](Check& o) {
        const auto eq = verify_kahane({{{1.0}, {1.0}, {1.0}}, kAbs}, 1.0, 1.0);
        o.require(eq.lhs == 0.25 && eq.rhs == 0.25 && eq.slack == 0.0 && eq.verdict == Verdict::holds,
                  "Kahane equality case");

        RandomStream rs(StreamKey{3}.child("acceptance.suite"), 0);
        std::size_t count = 0;
        bool ok = true;
        for (int i = 0; i < 500; ++i) {
            const auto inst = fixtures::random_sign_instance(rs, 12, 3);
            const double s = 0.1 + 2 * rs.uniform();
            const double t = 0.1 + 2 * rs.uniform();
            std::vector<SlackReport> rep{verify_kahane(inst, s, t), verify_l1_l2(inst)};
            for (double theta : {0.1, 0.5, 0.9}) rep.push_back(verify_paley_zygmund(inst, theta));
            std::vector<double> a(inst.size()), b(inst.size());
            for (std::size_t k = 0; k < a.size(); ++k) {
                b[k] = 4 * rs.uniform() - 2;
                a[k] = b[k] * (2 * rs.uniform() - 1);
            }
            rep.push_back(verify_contraction(inst.vectors, a, b, inst.norm));
            ok = all_hold(rep, count) && ok;
        }
        const std::vector<double> grid{0.25, 0.5, 1.0, 1.5, 2.0};
        for (int i = 0; i < 100; ++i) {
            const auto law = fixtures::random_finite_law(rs, 4, 3, 3);
            const Norm n = fixtures::random_norm(rs, law.dimension());
            for (double level : grid) {
                const SumLevels lv{grid[fixtures::uniform_index(rs, 5)], level, grid[fixtures::uniform_index(rs, 5)]};
                ok = all_hold(verify_sum_inequalities(law, n, lv).all(), count) && ok;
            }
        }
        o.require(ok, "zero violations, all exact");
        o.detail << count << " exact checks";
    });

    DominationReport gauss1;
    criterion(4, "tensorisation of three Gaussian pairs at (16, 2)", 300.0, [&](Check& o) {
        gauss1 = gaussian_tensorisation();
        o.require(gauss1.kappa == 16.0 && gauss1.lambda == 2.0, "constants (16, 2)");
        o.require(gauss1.count(Verdict::violated) == 0, "no violated norm");
        for (const auto& s : gauss1.stages) o.require(s.count(Verdict::violated) == 0, "no violated pair");
        o.require(gauss1.records.size() == 50, "50 norms");
        o.detail << "holds=" << gauss1.count(Verdict::holds) << " inconclusive=" << gauss1.count(Verdict::inconclusive)
                 << " violated=" << gauss1.count(Verdict::violated);
    });

    criterion(5, "tail recursion and induction threshold", 1.0, [](Check& o) {
        const WBParams params{1.0, 2.0, 0.5};
        const auto t = recursion_bound(1e-3, params, 10);
        o.require(std::abs(t.rows[1].recursive - 0.006004) <= 1e-15, "k=1 value 0.006004");
        const double threshold = 1.0 / (96.0 * 81.0);
        bool rows_ok = true;
        for (double f : {1e-4, 1e-2, 0.1, 0.5, 0.9, 1.0}) {
            const auto tt = recursion_bound(f * threshold, params, 10);
            for (const auto& r : tt.rows)
                rows_ok = rows_ok && r.recursive <= r.closed_form * (1 + 1e-12) &&
                          std::abs(r.closed_form - 12.0 * 9.0 * std::pow(3.0, -2.0 * r.k) * f * threshold) <=
                              1e-12 * r.closed_form;
        }
        o.require(rows_ok, "recursive <= closed form below the threshold");
        const auto edge = recursion_bound(threshold, params, 10);
        const double theta_prime = wb_tensorize_constants(params).theta;
        o.require(std::abs(edge.rows[1].multiplier - 1.0) <= 1e-15, "multiplier 1 at the threshold");
        o.require(std::abs(edge.threshold - theta_prime) <= 1e-15 * theta_prime, "threshold equals theta'");
        o.detail << "p1=" << t.rows[1].recursive << " theta'=" << theta_prime;
    });

    criterion(6, "weak Borell tensorisation for three Pareto(2) summands", 300.0, [](Check& o) {
        const WBParams params{1.0, 2.0, 0.5};
        const auto tp = wb_tensorize_constants(params);
        o.require(std::abs(tp.C - 972.0) <= 1e-9 && std::abs(tp.theta - 1.0 / 7776.0) <= 1e-18, "WB(972, 2, 1/7776)");
        std::vector<Norm> norms;
        for (double c : {0.002, 0.003, 0.005}) norms.push_back(Norm::scaled(kAbs, c));
        WBOptions opt;
        opt.estimator.mode = Estimator::Mode::automatic;
        opt.estimator.samples = 10'000'000;
        const auto r = wb_sum_experiment(std::vector<Source>(3, Source::pareto_tail(2.0)), params, norms,
                                         {1, 3, 9, 27}, opt, StreamKey{6});
        o.require(r.method == TailMethod::monte_carlo, "sum by Monte Carlo");
        o.require(r.count(Verdict::violated) == 0, "no violated cell");
        o.require(!r.records.empty(), "some norm passes the premise gate");
        bool slack0 = !r.stages.empty();
        for (const auto& st : r.stages) {
            slack0 = slack0 && st.method == TailMethod::closed_form && st.verdict == Verdict::holds;
            for (const auto& rec : st.records)
                slack0 = slack0 && std::abs(rec.plambda.value - rec.bound) <= 1e-12 * rec.bound;
        }
        o.require(slack0, "component check holds with slack 0");
        o.detail << "checked=" << r.records.size() << " holds=" << r.count(Verdict::holds)
                 << " inconclusive=" << r.count(Verdict::inconclusive) << " skipped_norms=" << r.skipped.size();
    });

    criterion(7, "permutation-mixture decomposition of 200 pairs", 10.0, [](Check& o) {
        RandomStream rs(StreamKey{7}.child("acceptance.majorisation"), 0);
        double worst_gap = 0.0, worst_sum = 0.0;
        bool ok = true;
        for (int i = 0; i < 200; ++i) {
            const auto [a, b] = fixtures::random_majorised_pair(rs, 8);
            const auto m = decompose(a, b);
            const auto back = m.reconstruct(b);
            for (std::size_t k = 0; k < a.size(); ++k) worst_gap = std::max(worst_gap, std::abs(back[k] - a[k]));
            worst_sum = std::max(worst_sum, std::abs(m.total_weight() - 1.0));
            for (const auto& t : m.terms) ok = ok && t.weight >= -1e-12;
            const std::size_t n = a.size();
            ok = ok && m.terms.size() <= (n - 1) * (n - 1) + 1;
        }
        o.require(worst_gap <= 1e-9, "reconstruction within 1e-9");
        o.require(worst_sum <= 1e-12, "weights sum to 1 within 1e-12");
        o.require(ok, "nonnegative weights and term count bound");
        o.detail << "max gap=" << worst_gap << " max weight error=" << worst_sum;
    });

    criterion(8, "Schur step on 200 random instances", 60.0, [](Check& o) {
        RandomStream rs(StreamKey{8}.child("acceptance.schur"), 0);
        std::size_t bad = 0;
        for (int i = 0; i < 200; ++i) {
            const auto [a, b] = fixtures::random_majorised_pair(rs, 4);
            const std::size_t dim = 1 + fixtures::uniform_index(rs, 2);
            const Source src = Source::finite(fixtures::random_finite(rs, dim, 2));
            const auto r = schur_convexity_check(a, b, src, fixtures::random_norm(rs, dim));
            if (r.method != SlackMethod::exact || r.verdict != Verdict::holds) ++bad;
        }
        o.require(bad == 0, "zero violations");
        o.detail << bad << " violations";
    });

    criterion(9, "half-stable counterexample on n in {4, 16, 64, 256}", 30.0, [](Check& o) {
        const std::vector<std::uint64_t> grid{4, 16, 64, 256};
        const auto t = counterexample_experiment(0.5, grid, 100, 2);
        o.require(t.witness.has_value(), "witness on the stated grid");
        for (const auto& r : t.rows) o.detail << " n=" << r.n << ":lhs=" << r.lhs.value << ",rhs=" << r.rhs;

        const auto cfg = parse_config(
            "kind: counterexample\nseed: 9\ndelta: 0.5\nn_grid: [4, 16, 64, 256]\nkappa: 100\nlambda: 2\n"
            "expected_violation: true\n");
        const auto run = execute(cfg);
        o.require(run.exit_code == 2, "CLI exit code 2");
        o.require(run.report.at("expected_violation") == true, "expected-violation flag");

        std::vector<std::uint64_t> extended;
        for (std::uint64_t n = 4; n <= (1u << 20); n *= 4) extended.push_back(n);
        const auto w = counterexample_experiment(0.5, extended, 100, 2);
        o.detail << " | first witness on 4^k: " << (w.witness ? std::to_string(*w.witness) : "none");
    });

    criterion(10, "determinism across runs and worker counts", 600.0, [&](Check& o) {
        for (const auto& e : catalog()) {
            if (e.kind == ExperimentKind::tensorize && e.name == "tensorize-gaussian") continue;
            if (e.kind == ExperimentKind::wb_sum || e.kind == ExperimentKind::majorize) continue;
            const auto cfg = parse_config(e.yaml, e.name);
            const auto a = execute(cfg).report.dump();
            const auto b = execute(cfg).report.dump();
            o.require(a == b, "identical report for " + e.name);
        }
        parallel::set_threads(8);
        const auto gauss8 = gaussian_tensorisation();
        parallel::set_threads(1);
        const bool same = to_json(gauss1).dump() == to_json(gauss8).dump();
        o.require(same, "1 and 8 workers agree on criterion 4");
        o.detail << "criterion-4 report " << (same ? "identical" : "differs") << " with 1 and 8 workers";
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
