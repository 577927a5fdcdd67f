#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "symdom/errors.hpp"
#include "symdom/fixtures.hpp"
#include "symdom/inequalities.hpp"
#include "symdom/weakborell.hpp"

using namespace symdom;

namespace {

const Norm kAbs = Norm::lp(1, 2.0);

Norm over(double c) { return Norm::scaled(kAbs, 1.0 / c); }

WBOptions exact_options() {
    WBOptions o;
    o.estimator.mode = Estimator::Mode::exact;
    return o;
}

Source heavy_discrete() {
    return Source::finite(FiniteSupportDist::symmetric(
        1, {{{1.0}, 0.003}, {{3.0}, 0.001}, {{9.0}, 0.0003}}, 1.0 - 2 * (0.003 + 0.001 + 0.0003)));
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((WBParams{0.0, 1.0, 0.5}.validate()), ParameterError);
    CHECK_THROWS_AS((WBParams{1.0, 0.0, 0.5}.validate()), ParameterError);
    CHECK_THROWS_AS((WBParams{1.0, 1.0, 1.0}.validate()), ParameterError);
    CHECK_THROWS_AS(check_wb(ProductLaw{Source::pareto_tail(2.0)}, {1, 2, 0.9}, {over(2)}, {}, {}, StreamKey{1}),
                    ParameterError);
}

TEST_CASE("pareto tail meets the bound with equality") {
    const ProductLaw law{Source::pareto_tail(2.0)};
    const auto r = check_wb(law, {1.0, 2.0, 0.9}, {over(2.0), kAbs}, {1, 2, 4}, {}, StreamKey{2});
    CHECK(r.method == TailMethod::closed_form);
    CHECK(r.verdict == Verdict::holds);
    REQUIRE(r.records.size() == 3);
    for (const auto& rec : r.records) {
        CHECK(rec.p1.value == 0.25);
        CHECK(rec.plambda.value == doctest::Approx(rec.bound).epsilon(1e-14));
        CHECK(rec.verdict == Verdict::holds);
    }
    REQUIRE(r.skipped.size() == 1);
    CHECK(r.skipped[0].p1.value == 1.0);
}

TEST_CASE("lambda = 1 always holds") {
    RandomStream rs(StreamKey{3}, 0);
    for (int trial = 0; trial < 30; ++trial) {
        const auto law = fixtures::random_finite_law(rs, 3, 2, 3);
        const auto r = check_wb(law, {1.0, 3.0, 0.99}, {fixtures::random_norm(rs, law.dimension())}, {1.0},
                                exact_options(), StreamKey{3});
        for (const auto& rec : r.records) CHECK(rec.verdict == Verdict::holds);
    }
}

TEST_CASE("norms failing the premise are excluded") {
    const auto r = check_wb(ProductLaw{Source::finite(FiniteSupportDist::rademacher(2.0))}, {1, 1, 0.5}, {kAbs},
                            default_lambda_grid(), exact_options(), StreamKey{4});
    CHECK(r.records.empty());
    CHECK(r.skipped.size() == 1);
    CHECK(r.verdict == Verdict::inconclusive);
}

TEST_CASE("a heavy lambda tail is a violation") {
    const auto r = check_wb(ProductLaw{heavy_discrete()}, {1.0, 2.0, 0.5}, {over(0.9)}, {3.0}, exact_options(),
                            StreamKey{5});
    CHECK(r.verdict == Verdict::violated);
}

TEST_CASE("tensorised constants") {
    const auto a = wb_tensorize_constants({1.0, 1.0, 0.5});
    CHECK(a.C == doctest::Approx(108.0));
    CHECK(a.theta == doctest::Approx(1.0 / 864.0));
    CHECK(a.delta == 1.0);
    const auto b = wb_tensorize_constants({1.0, 2.0, 0.5});
    CHECK(b.C == doctest::Approx(972.0));
    CHECK(b.theta == doctest::Approx(1.0 / 7776.0));
    const auto c = wb_tensorize_constants({2.0, 2.0, 0.5});
    CHECK(c.C == doctest::Approx(2 * b.C));
    CHECK(c.theta <= b.theta);
    CHECK(wb_tensorize_constants({1.0, 1.0, 1e-4}).theta == 5e-5);
}

TEST_CASE("tail recursion") {
    const auto t = recursion_bound(1e-3, {1.0, 2.0, 0.5}, 5);
    REQUIRE(t.rows.size() == 6);
    CHECK(t.rows[0].recursive == 1e-3);
    CHECK(t.rows[1].recursive == doctest::Approx(0.006004).epsilon(1e-12));
    CHECK_THROWS_AS(recursion_bound(1.0, {1.0, 2.0, 0.5}, 3), ParameterError);

    const double p0 = 1.0 / 864.0;
    const auto edge = recursion_bound(p0, {1.0, 1.0, 0.5}, 10);
    CHECK(edge.asserted);
    CHECK(edge.rows[1].multiplier == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(edge.all_hold());
}

TEST_CASE("recursion stays below the closed form under the threshold") {
    for (double C : {1.0, 1.5, 3.0})
        for (double delta : {0.5, 1.0, 2.0, 3.0}) {
            const double threshold = 1.0 / (96.0 * C * std::pow(9.0, delta));
            for (double f : {1e-3, 0.1, 0.5, 1.0}) {
                const auto t = recursion_bound(f * threshold, {C, delta, 0.5}, 20);
                CHECK(t.asserted);
                CHECK(t.all_hold());
            }
        }
}

TEST_CASE("a larger C never turns holds into violated") {
    RandomStream rs(StreamKey{6}, 0);
    for (int trial = 0; trial < 60; ++trial) {
        const auto law = fixtures::random_finite_law(rs, 3, 2, 3);
        const std::vector<Norm> norms{fixtures::random_norm(rs, law.dimension()),
                                      Norm::scaled(fixtures::random_norm(rs, law.dimension()), 0.3)};
        const auto a = check_wb(law, {1.0, 1.0, 0.9}, norms, default_lambda_grid(), exact_options(), StreamKey{6});
        const auto b = check_wb(law, {2.0, 1.0, 0.9}, norms, default_lambda_grid(), exact_options(), StreamKey{6});
        for (std::size_t i = 0; i < a.records.size(); ++i)
            if (a.records[i].verdict == Verdict::holds) CHECK(b.records[i].verdict == Verdict::holds);
    }
}

TEST_CASE("the sum premise implies the component premise") {
    RandomStream rs(StreamKey{7}, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto law = fixtures::random_finite_law(rs, 4, 2, 3);
        const Norm n = Norm::scaled(fixtures::random_norm(rs, law.dimension()), 0.1 + rs.uniform());
        const auto sum = verify_sum_inequalities(law, n, {1.0, 1.0, 1.0});
        const double pmax = sum.max_summand.lhs;
        const double psum = sum.max_summand.rhs / 2.0;
        const double theta = 0.9;
        const double theta_prime = wb_tensorize_constants({1.0, 1.0, theta}).theta;
        if (psum < theta_prime) CHECK(pmax < theta);
        CHECK(exact_leq(pmax, 2.0 * psum));
    }
}

TEST_CASE("finite heavy-tailed sums") {
    const std::vector<Source> parts(3, heavy_discrete());
    const std::vector<Norm> norms{over(0.9), over(3.5), over(9.5)};
    const WBParams params{1.0, 1.0, 0.5};
    const auto r = wb_sum_experiment(parts, params, norms, {1, 3, 9, 27}, exact_options(), StreamKey{8});
    CHECK(r.verdict == Verdict::holds);
    CHECK(r.method == TailMethod::enumeration);
    CHECK(!r.records.empty());
    const auto tp = wb_tensorize_constants(params);
    for (const auto& rec : r.records)
        CHECK(rec.bound == doctest::Approx(tp.C * std::pow(rec.lambda, -tp.delta) * rec.p1.value).epsilon(1e-12));
}

TEST_CASE("a single component reduces to the weaker check") {
    const auto r = wb_sum_experiment({heavy_discrete()}, {1.0, 1.0, 0.5}, {over(0.9), over(3.5)}, {1, 3, 9, 27},
                                     exact_options(), StreamKey{9});
    CHECK(r.verdict != Verdict::violated);
}

TEST_CASE("a failing component is rejected") {
    CHECK_THROWS_AS(wb_sum_experiment({heavy_discrete()}, {1.0, 2.0, 0.5}, {over(0.9)}, {3.0}, exact_options(),
                                      StreamKey{10}),
                    PreconditionError);
}

TEST_CASE("pareto sums by Monte Carlo") {
    const std::vector<Source> parts(3, Source::pareto_tail(2.0));
    WBOptions o;
    o.estimator.samples = 1'000'000;
    const auto r = wb_sum_experiment(parts, {1.0, 2.0, 0.5}, {over(200), over(300), over(600)}, {1, 3, 9, 27}, o,
                                     StreamKey{11});
    CHECK(r.method == TailMethod::monte_carlo);
    CHECK(r.verdict != Verdict::violated);
    CHECK(r.count(Verdict::violated) == 0);
}

TEST_CASE("serialisation") {
    const auto r = check_wb(ProductLaw{Source::pareto_tail(2.0)}, {1.0, 2.0, 0.9}, {over(2.0)}, {1, 2}, {}, StreamKey{12});
    const auto csv = wb_csv(r);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(to_json(r).at("records").size() == 2);
    const auto t = recursion_bound(1e-4, {1.0, 2.0, 0.5}, 4);
    CHECK(to_json(t).at("rows").size() == 5);
}
