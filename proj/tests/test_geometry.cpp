#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "symdom/errors.hpp"
#include "symdom/estimation.hpp"
#include "symdom/fixtures.hpp"
#include "symdom/geometry.hpp"

using namespace symdom;

TEST_CASE("closed-form values") {
    const std::vector<double> v{3.0, 4.0};
    CHECK(Norm::lp(2, 2.0)(v) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(Norm::lp(2, 1.0)(v) == 7.0);
    CHECK(Norm::lp(2, std::numeric_limits<double>::infinity())(v) == 4.0);
    CHECK(Norm::lp(2, 3.0)(v) == doctest::Approx(std::cbrt(91.0)));
    CHECK(Norm::polytope_gauge({{1, 0}, {0, 1}, {1, 1}})(std::vector<double>{1, 1}) == 2.0);

    Eigen::MatrixXd a(2, 2);
    a << 4, 0, 0, 1;
    CHECK(Norm::ellipsoid(a)(std::vector<double>{1, 1}) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
    CHECK(Norm::weighted_lp(1.0, {2.0, 0.5})(v) == 8.0);
    CHECK(Norm::scaled(Norm::lp(2, 2.0), 0.5)(v) == 2.5);
}

TEST_CASE("invalid parameters") {
    CHECK_THROWS_AS(Norm::lp(2, 0.5), ParameterError);
    CHECK_THROWS_AS(Norm::lp(0, 2.0), ParameterError);
    CHECK_THROWS_AS(Norm::weighted_lp(2.0, {1.0, 0.0}), ParameterError);
    Eigen::MatrixXd sing(2, 2);
    sing << 1, 1, 1, 1;
    CHECK_THROWS_AS(Norm::ellipsoid(sing), ParameterError);
    CHECK_THROWS_AS(Norm::polytope_gauge({{1, 0}, {2, 0}}), ParameterError);
    CHECK_THROWS_AS(Norm::scaled(Norm::lp(2, 2.0), -1.0), ParameterError);
    CHECK_THROWS_AS(Norm::lp(2, 2.0)(std::vector<double>{1, 2, 3}), ParameterError);
}

TEST_CASE("norm axioms on random members") {
    RandomStream rs(StreamKey{9}, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t dim = 1 + fixtures::uniform_index(rs, 4);
        const Norm n = fixtures::random_norm(rs, dim);
        std::vector<double> x(dim), y(dim), s(dim), cx(dim), zero(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            x[i] = 4 * rs.uniform() - 2;
            y[i] = 4 * rs.uniform() - 2;
            s[i] = x[i] + y[i];
        }
        const double c = 6 * rs.uniform() - 3;
        for (std::size_t i = 0; i < dim; ++i) cx[i] = c * x[i];
        const double nx = n(x);
        CHECK(nx >= 0.0);
        CHECK(n(zero) == 0.0);
        CHECK(std::abs(n(cx) - std::abs(c) * nx) <= 1e-12 * (1 + std::abs(c) * nx));
        CHECK(n(s) <= nx + n(y) + 1e-12 * (1 + nx + n(y)));
    }
}

TEST_CASE("family is deterministic and starts with the classical norms") {
    const auto a = random_norm_family(7, 3, 20);
    const auto b = random_norm_family(7, 3, 20);
    const auto c = random_norm_family(8, 3, 20);
    REQUIRE(a.size() == 20);
    CHECK(family_to_json(a) == family_to_json(b));
    CHECK(family_to_json(a) != family_to_json(c));
    const std::vector<double> v{1, -2, 2};
    CHECK(a[0](v) == doctest::Approx(3.0));
    CHECK(a[1](v) == 5.0);
    CHECK(a[2](v) == 2.0);

    const auto one = random_norm_family(1, 2, 1, {NormFamilyMix::Kinds::lp_only});
    REQUIRE(one.size() == 1);
    CHECK(one[0](std::vector<double>{3, 4}) == doctest::Approx(5.0));
}

TEST_CASE("scaled family members stay in the requested range") {
    NormFamilyMix mix;
    mix.scale_min = 0.5;
    mix.scale_max = 2.0;
    const auto family = random_norm_family(3, 2, 30, mix);
    for (std::size_t i = 3; i < family.size(); ++i) CHECK(family[i].kind() == Norm::Kind::scaled);
}

TEST_CASE("json round trip") {
    for (const auto& n : random_norm_family(4, 3, 25)) {
        const Norm back = Norm::from_json(n.to_json());
        const std::vector<double> v{0.3, -1.7, 2.25};
        CHECK(back(v) == n(v));
        CHECK(back.describe() == n.describe());
    }
}

TEST_CASE("rescaling a norm moves the tail level") {
    RandomStream rs(StreamKey{12}, 0);
    const Estimator exact{Estimator::Mode::exact};
    for (int trial = 0; trial < 50; ++trial) {
        const auto law = fixtures::random_finite_law(rs, 3, 2, 3);
        const Norm n = fixtures::random_norm(rs, law.dimension());
        for (double t : {0.25, 0.5, 2.0, 4.0}) {
            const std::vector<Norm> pair{n, Norm::scaled(n, 1.0 / t)};
            const std::vector<double> levels{t, 1.0};
            const auto cells = tail_probabilities(law, pair, levels, exact, StreamKey{1});
            // cell index is norm * levels + level
            CHECK(cells[0].value == cells[3].value);
        }
    }
}
