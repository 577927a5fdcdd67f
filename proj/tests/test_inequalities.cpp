#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "symdom/errors.hpp"
#include "symdom/fixtures.hpp"
#include "symdom/inequalities.hpp"

using namespace symdom;

namespace {

SignInstance scalars(std::vector<double> xs) {
    SignInstance inst{{}, Norm::lp(1, 2.0)};
    for (double x : xs) inst.vectors.push_back({x});
    return inst;
}

void require_exact_holds(const SlackReport& r) {
    INFO(r.name << " lhs=" << r.lhs << " rhs=" << r.rhs);
    CHECK(r.method == SlackMethod::exact);
    CHECK(r.verdict == Verdict::holds);
    CHECK(r.holds);
}

}  // namespace

TEST_CASE("sign tails") {
    CHECK(sign_tail_exact(scalars({1, 1, 1}), 1.0) == 0.25);
    CHECK(sign_tail_exact(scalars({1, 1, 1}), -0.5) == 1.0);
    CHECK(sign_tail_exact(scalars({1}), 0.5) == 1.0);
    CHECK(sign_tail_exact(scalars({1, 1}), 0.0) == 0.5);
}

TEST_CASE("sign means") {
    CHECK(sign_mean_exact(scalars({1, 1, 1}), SignTransform::shifted_plus(1.0)) == 0.5);
    CHECK(sign_mean_exact(scalars({2}), SignTransform::shifted_plus(1.0)) == 1.0);
    CHECK(sign_mean_exact(scalars({1, 1}), SignTransform::square()) == 2.0);
    CHECK(sign_mean_exact(scalars({1, 1}), SignTransform::identity()) == 1.0);
    CHECK(sign_mean_exact(scalars({1, 2, 4}), SignTransform::identity()) == 4.0);
}

TEST_CASE("enumeration cap") {
    CHECK_NOTHROW(sign_tail_exact(scalars(std::vector<double>(22, 1.0)), 3.0));
    CHECK_THROWS_AS(sign_tail_exact(scalars(std::vector<double>(23, 1.0)), 3.0), CapacityError);
    CHECK_THROWS_AS(sign_tail_exact(scalars({}), 1.0), ParameterError);
}

TEST_CASE("gray-code enumeration matches direct sums") {
    RandomStream rs(StreamKey{31}, 0);
    for (int trial = 0; trial < 30; ++trial) {
        const auto inst = fixtures::random_sign_instance(rs, 10, 3);
        const std::size_t n = inst.size();
        const double t = 2 * rs.uniform();
        std::uint64_t hits = 0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            Vector s(inst.norm.dimension(), 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < s.size(); ++k)
                    s[k] += ((mask >> i) & 1u) ? -inst.vectors[i][k] : inst.vectors[i][k];
            hits += inst.norm(s) > t;
        }
        const double direct = static_cast<double>(hits) / std::ldexp(1.0, static_cast<int>(n));
        CHECK(sign_tail_exact(inst, t) == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("sign tail is nonincreasing in t") {
    RandomStream rs(StreamKey{32}, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto inst = fixtures::random_sign_instance(rs, 12, 3);
        double prev = 1.0;
        for (int g = 0; g < 20; ++g) {
            const double p = sign_tail_exact(inst, 0.3 * g);
            CHECK(p <= prev);
            prev = p;
        }
    }
}

TEST_CASE("Kahane examples") {
    const auto eq = verify_kahane(scalars({1, 1, 1}), 1.0, 1.0);
    require_exact_holds(eq);
    CHECK(eq.lhs == 0.25);
    CHECK(eq.rhs == 0.25);
    CHECK(eq.slack == 0.0);

    const auto single = verify_kahane(scalars({1}), 1.0, 1.0);
    require_exact_holds(single);
    CHECK(single.lhs == 0.0);
    CHECK_THROWS_AS(verify_kahane(scalars({1}), 0.0, 1.0), ParameterError);
}

TEST_CASE("L1-L2 examples") {
    const auto ext = verify_l1_l2(scalars({1, 1}));
    require_exact_holds(ext);
    CHECK(ext.lhs == 2.0);
    CHECK(ext.rhs == 2.0);
    const auto one = verify_l1_l2(scalars({1}));
    CHECK(one.lhs == 1.0);
    CHECK(one.rhs == 2.0);
}

TEST_CASE("Paley-Zygmund examples") {
    const auto a = verify_paley_zygmund(scalars({1}), 0.5);
    require_exact_holds(a);
    CHECK(a.lhs == 0.125);
    CHECK(a.rhs == 1.0);
    const auto b = verify_paley_zygmund(scalars({1, 1}), 0.9);
    require_exact_holds(b);
    CHECK(b.rhs == 0.5);
    CHECK(b.lhs == doctest::Approx(0.005));
    CHECK_THROWS_AS(verify_paley_zygmund(scalars({1}), 1.0), ParameterError);
}

TEST_CASE("contraction examples") {
    const std::vector<Vector> v{{1.0}, {1.0}};
    const Norm abs = Norm::lp(1, 2.0);
    const auto zero = verify_contraction(v, {0, 0}, {1, 2}, abs);
    require_exact_holds(zero);
    CHECK(zero.lhs == 0.0);
    const auto r = verify_contraction(v, {1, 1}, {1, 2}, abs);
    require_exact_holds(r);
    CHECK(r.lhs == 1.0);
    CHECK(r.rhs == 2.0);
    CHECK_THROWS_AS(verify_contraction(v, {1, 3}, {1, 2}, abs), ParameterError);
}

TEST_CASE("random sign-sum suites") {
    RandomStream rs(StreamKey{33}, 0);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto inst = fixtures::random_sign_instance(rs, 12, 3);
        const double s = 0.1 + 2 * rs.uniform();
        const double t = 0.1 + 2 * rs.uniform();
        require_exact_holds(verify_kahane(inst, s, t));
        require_exact_holds(verify_l1_l2(inst));
        for (double theta : {0.1, 0.5, 0.9}) require_exact_holds(verify_paley_zygmund(inst, theta));

        std::vector<double> a(inst.size()), b(inst.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            b[i] = 4 * rs.uniform() - 2;
            a[i] = b[i] * (2 * rs.uniform() - 1);
        }
        require_exact_holds(verify_contraction(inst.vectors, a, b, inst.norm));
        checked += 6;
    }
    CHECK(checked == 1200);
}

TEST_CASE("Monte Carlo sign tails agree with enumeration") {
    RandomStream rs(StreamKey{34}, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto inst = fixtures::random_sign_instance(rs, 12, 3);
        const double t = 1.5 * rs.uniform();
        const double p = sign_tail_exact(inst, t);
        SignMonteCarlo mc{100'000, 0.999, StreamKey{34, static_cast<std::uint64_t>(trial)}};
        const auto norms = detail::sample_sign_norms(inst.vectors, inst.norm, mc);
        REQUIRE(norms.size() == mc.samples);
        double hits = 0;
        for (double x : norms) hits += x > t;
        // 99.9% two-sided normal interval for a binomial count
        const double sd = std::sqrt(mc.samples * p * (1 - p));
        CHECK(std::abs(hits - mc.samples * p) <= 3.2905 * sd + 1e-9);
    }
}

TEST_CASE("large instances fall back to Monte Carlo") {
    SignInstance big = scalars(std::vector<double>(30, 1.0));
    SignMonteCarlo mc{200'000, 0.99, StreamKey{35}};
    for (const auto& r : {verify_kahane(big, 3.0, 3.0, mc), verify_l1_l2(big, mc),
                          verify_paley_zygmund(big, 0.5, mc)}) {
        INFO(r.name);
        CHECK(r.method == SlackMethod::monte_carlo);
        CHECK(r.samples == mc.samples);
        CHECK(r.verdict != Verdict::violated);
    }
}

TEST_CASE("sum inequalities on three Rademacher scalars") {
    const Source r = Source::finite(FiniteSupportDist::rademacher());
    const auto rep = verify_sum_inequalities(ProductLaw{r, r, r}, Norm::lp(1, 2.0), {1.0, 1.0, 1.0});
    require_exact_holds(rep.max_summand);
    CHECK(rep.max_summand.lhs == 0.0);
    CHECK(rep.max_summand.rhs == 0.5);
    require_exact_holds(rep.levy);
    require_exact_holds(rep.hoffmann_jorgensen);
    require_exact_holds(rep.summand_tails);
}

TEST_CASE("sum inequalities for a single summand") {
    const Source r = Source::finite(FiniteSupportDist::symmetric(1, {{{2.0}, 0.25}}, 0.5));
    const auto rep = verify_sum_inequalities(ProductLaw{r}, Norm::lp(1, 2.0), {1.0, 1.0, 1.0});
    CHECK(rep.levy.lhs == 0.5);
    CHECK(rep.levy.rhs == 1.0);
}

TEST_CASE("summand-tail bound is skipped when the maximum always exceeds t") {
    const Source r = Source::finite(FiniteSupportDist::rademacher(2.0));
    const auto rep = verify_sum_inequalities(ProductLaw{r, r}, Norm::lp(1, 2.0), {1.0, 1.0, 1.0});
    CHECK(rep.summand_tails.skipped);
    CHECK(rep.summand_tails.verdict != Verdict::violated);
}

TEST_CASE("random product laws satisfy the sum inequalities") {
    RandomStream rs(StreamKey{36}, 0);
    const std::vector<double> grid{0.25, 0.5, 1.0, 1.5, 2.0};
    for (int trial = 0; trial < 100; ++trial) {
        const auto law = fixtures::random_finite_law(rs, 4, 3, 3);
        const Norm n = fixtures::random_norm(rs, law.dimension());
        for (double level : grid) {
            const SumLevels levels{grid[fixtures::uniform_index(rs, grid.size())], level,
                                   grid[fixtures::uniform_index(rs, grid.size())]};
            for (const auto& r : verify_sum_inequalities(law, n, levels).all()) {
                if (r.skipped) continue;
                require_exact_holds(r);
            }
        }
    }
}

TEST_CASE("sum inequalities by Monte Carlo") {
    const ProductLaw law{Source::pareto_tail(1.5), Source::pareto_tail(1.5), Source::symmetric_stable(1.2)};
    Estimator est;
    est.samples = 200'000;
    const auto rep = verify_sum_inequalities(law, Norm::lp(1, 2.0), {1.0, 2.0, 1.0}, est, StreamKey{37});
    for (const auto& r : rep.all()) {
        INFO(r.name);
        CHECK(r.method == SlackMethod::monte_carlo);
        CHECK(r.verdict != Verdict::violated);
    }
}

TEST_CASE("json form") {
    const auto j = to_json(verify_kahane(scalars({1, 1, 1}), 1.0, 1.0));
    CHECK(j.at("lhs") == 0.25);
    CHECK(j.at("holds") == true);
    CHECK(j.at("method") == "exact");
}

TEST_CASE("Paley-Zygmund needs a nonzero sum") {
    const auto r = verify_paley_zygmund(scalars({0, 0}), 0.5);
    CHECK(r.skipped);
    CHECK(r.verdict != Verdict::violated);
}
