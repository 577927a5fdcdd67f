#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "symdom/distributions.hpp"
#include "symdom/fixtures.hpp"
#include "symdom/parallel.hpp"

using namespace symdom;

namespace {

double empirical_tail(const std::vector<double>& xs, double t) {
    std::size_t hits = 0;
    for (double x : xs) hits += std::abs(x) > t;
    return static_cast<double>(hits) / static_cast<double>(xs.size());
}

}  // namespace

TEST_CASE("finite laws validate their invariants") {
    CHECK_NOTHROW(FiniteSupportDist(1, {{{1.0}, 0.5}, {{-1.0}, 0.5}}));
    CHECK_THROWS_AS(FiniteSupportDist(1, {{{1.0}, 0.5}, {{-1.0}, 0.4}}), ParameterError);
    CHECK_THROWS_AS(FiniteSupportDist(1, {{{1.0}, 0.6}, {{-1.0}, 0.4}}), ParameterError);
    CHECK_THROWS_AS(FiniteSupportDist(1, {{{1.0}, 1.0}}), ParameterError);
    CHECK_THROWS_AS(FiniteSupportDist(1, {{{1.0}, 0.25}, {{1.0}, 0.25}, {{-1.0}, 0.5}}), ParameterError);
    CHECK_THROWS_AS(FiniteSupportDist(2, {{{1.0}, 0.5}, {{-1.0}, 0.5}}), ParameterError);
    CHECK_NOTHROW(FiniteSupportDist::point_mass_at_origin(3));
}

TEST_CASE("enumerating three Rademacher components") {
    const Source r = Source::finite(FiniteSupportDist::rademacher());
    const auto outcomes = enumerate(ProductLaw{r, r, r});
    REQUIRE(outcomes.size() == 8);
    for (const auto& o : outcomes) CHECK(o.probability == 0.125);
}

TEST_CASE("enumerating a three-atom law") {
    const auto d = FiniteSupportDist::symmetric(1, {{{2.0}, 0.25}}, 0.5);
    const auto outcomes = enumerate(ProductLaw{Source::finite(d)});
    CHECK(outcomes.size() == 3);
    double total = 0.0;
    for (const auto& o : outcomes) total += o.probability;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two Rademacher copies cancel with probability one half") {
    const Source r = Source::finite(FiniteSupportDist::rademacher());
    double zero = 0.0;
    for (const auto& o : enumerate(ProductLaw{r, r}))
        if (o.parts[0][0] + o.parts[1][0] == 0.0) zero += o.probability;
    CHECK(zero == 0.5);
}

TEST_CASE("enumeration cap") {
    const Source r = Source::finite(FiniteSupportDist::symmetric(1, {{{1.0}, 0.25}, {{2.0}, 0.25}}));
    const ProductLaw law(std::vector<Source>(10, r));
    try {
        enumerate(law, 1000);
        FAIL("expected a capacity error");
    } catch (const CapacityError& e) {
        CHECK(e.requested() == 1048576);
        CHECK(e.cap() == 1000);
    }
}

TEST_CASE("random finite laws enumerate to total mass one") {
    RandomStream rs(StreamKey{5}, 0);
    for (int i = 0; i < 50; ++i) {
        const auto law = fixtures::random_finite_law(rs, 4, 3, 3);
        double total = 0.0;
        for (const auto& o : enumerate(law)) {
            CHECK(o.probability > 0.0);
            total += o.probability;
        }
        CHECK(std::abs(total - 1.0) <= 1e-9);
    }
}

TEST_CASE("exact thinning") {
    const auto r = FiniteSupportDist::rademacher();
    const auto same = thin_exact(r, 1.0);
    CHECK(same.size() == 2);
    const auto half = thin_exact(r, 0.5);
    REQUIRE(half.size() == 3);
    for (const auto& a : half.atoms()) CHECK(a.probability == (a.at[0] == 0.0 ? 0.5 : 0.25));
    CHECK_THROWS_AS(thin_exact(r, 0.0), ParameterError);
    CHECK_THROWS_AS(thin_exact(r, 1.5), ParameterError);

    const auto exact = thin(Source::finite(r), 0.5).exact();
    REQUIRE(exact.has_value());
    CHECK(exact->size() == 3);
}

TEST_CASE("gaussian sampler") {
    const auto xs = sample(Source::gaussian(Eigen::MatrixXd::Identity(1, 1)), 1'000'000, 17);
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    CHECK(std::abs(mean) < 0.005);
    CHECK(empirical_tail(xs, 1.0) == doctest::Approx(std::erfc(1.0 / std::sqrt(2.0))).epsilon(0.01));

    Eigen::MatrixXd bad(2, 2);
    bad << 1, 2, 2, 1;
    CHECK_THROWS_AS(Source::gaussian(bad), ParameterError);
}

TEST_CASE("pareto sampler") {
    const auto xs = sample(Source::pareto_tail(2.0), 1'000'000, 3);
    CHECK(std::abs(empirical_tail(xs, 2.0) - 0.25) < 0.002);
    CHECK(*Source::pareto_tail(2.0).survival(2.0) == 0.25);
    CHECK(*Source::pareto_tail(2.0).survival(0.5) == 1.0);
}

TEST_CASE("half-stable sampler against the analytic tail") {
    // exact tail of the symmetric 1/2-stable law with scale 1 (cross-checked with scipy.stats.levy_stable)
    CHECK(half_stable_tail(1.0) == doctest::Approx(0.5425606253786865).epsilon(1e-10));
    const auto xs = sample(Source::symmetric_stable(0.5), 1'000'000, 11);
    CHECK(std::abs(empirical_tail(xs, 1.0) - 0.5425606253786865) < 0.005);
    CHECK(std::abs(empirical_tail(xs, 10.0) - half_stable_tail(10.0)) < 0.005);
    CHECK(half_stable_tail(100.0) < half_stable_tail(10.0));
}

TEST_CASE("stable samplers with closed-form tails") {
    const auto cauchy = sample(Source::symmetric_stable(1.0), 400'000, 12);
    CHECK(std::abs(empirical_tail(cauchy, 1.0) - 0.5) < 0.005);
    const auto gauss = sample(Source::symmetric_stable(2.0), 400'000, 13);
    CHECK(std::abs(empirical_tail(gauss, 1.0) - std::erfc(0.5)) < 0.005);
    CHECK_THROWS_AS(Source::symmetric_stable(0.0), ParameterError);
    CHECK_THROWS_AS(Source::symmetric_stable(2.5), ParameterError);
}

TEST_CASE("thinned gaussian puts mass 1 - p at the origin") {
    const auto xs = sample(thin(Source::gaussian(Eigen::MatrixXd::Identity(1, 1)), 0.3), 1'000'000, 21);
    const auto zeros = static_cast<double>(std::count(xs.begin(), xs.end(), 0.0));
    CHECK(std::abs(zeros / 1e6 - 0.7) < 0.002);
}

TEST_CASE("samples are sign symmetric") {
    const std::vector<Source> sources{Source::symmetric_stable(0.8), Source::pareto_tail(1.5),
                                      Source::gaussian(Eigen::MatrixXd::Identity(1, 1)),
                                      Source::finite(FiniteSupportDist::symmetric(1, {{{1.0}, 0.1}}, 0.8))};
    for (const auto& s : sources) {
        const auto xs = sample(s, 100'000, 8);
        double pos = 0.0, neg = 0.0;
        for (double x : xs) {
            pos += x > 0;
            neg += x < 0;
        }
        // two-sided sign test at the 99% level
        const double n = pos + neg;
        CHECK(std::abs(pos - n / 2) <= 2.576 * std::sqrt(n) / 2);
    }
}

TEST_CASE("sampling is deterministic in seed and count") {
    const Source s = Source::symmetric_stable(1.3, 2.0);
    CHECK(sample(s, 1000, 1) == sample(s, 1000, 1));
    CHECK(sample(s, 1000, 1) != sample(s, 1000, 2));
}

TEST_CASE("products concatenate coordinates") {
    const Source p = Source::iid_product({Source::pareto_tail(2.0), Source::gaussian(Eigen::MatrixXd::Identity(2, 2))});
    CHECK(p.dimension() == 3);
    CHECK(sample(p, 10, 4).size() == 30);
}

TEST_CASE("split scheme") {
    const auto s = split_scheme(2.5, 2);
    CHECK(s.pieces() == 3);
    CHECK(s.piece_probability() == doctest::Approx(1.0 / 3.0));
    const auto one = split_scheme(1.0, 2);
    CHECK(one.pieces() == 1);
    for (int g = 0; g <= 1000; ++g) {
        const double t = g / 1000.0;
        const std::vector<double> pt{t, 1.0 - t};
        for (std::size_t i = 0; i < 2; ++i) {
            int total = 0;
            for (std::size_t k = 1; k <= s.pieces(); ++k) total += s.indicator(i, k, pt);
            REQUIRE(total == 1);
            CHECK(one.indicator(i, 1, pt));
        }
    }

    const auto two = split_scheme(2.0, 2);
    RandomStream rs(StreamKey{77}, 0);
    int both = 0;
    const int draws = 1'000'000;
    for (int i = 0; i < draws; ++i) {
        const std::vector<double> pt{rs.uniform(), rs.uniform()};
        both += two.indicator(0, 1, pt) && two.indicator(1, 1, pt);
    }
    CHECK(std::abs(both / static_cast<double>(draws) - 0.25) < 0.002);
    CHECK_THROWS_AS(split_scheme(0.5, 2), ParameterError);
}
