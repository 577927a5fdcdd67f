#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "symdom/distributions.hpp"
#include "symdom/parallel.hpp"
#include "symdom/rng.hpp"
#include "symdom/stats.hpp"

using namespace symdom;

// Known-answer vectors for Philox4x32-10 (Salmon et al., Random123 kat_vectors).
TEST_CASE("philox known answers") {
    using B = Philox4x32::Block;
    using K = Philox4x32::Key;
    CHECK(Philox4x32::encrypt(B{0, 0, 0, 0}, K{0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::encrypt(B{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
          B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::encrypt(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
          B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
    RandomStream a(StreamKey{7, 3}, 0);
    RandomStream b(StreamKey{7, 3}, 0);
    RandomStream c(StreamKey{7, 3}, 1);
    RandomStream d(StreamKey{8, 3}, 0);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.bits();
        CHECK(x == b.bits());
        seen.insert(x);
        seen.insert(c.bits());
        seen.insert(d.bits());
    }
    CHECK(seen.size() == 300);
}

TEST_CASE("child keys depend on purpose and index") {
    const StreamKey root{42, 0};
    CHECK(root.child("a").stream != root.child("b").stream);
    CHECK(root.child("a", 0).stream != root.child("a", 1).stream);
    CHECK(root.child("a", 5).stream == root.child("a", 5).stream);
    CHECK(root.child("a").seed == 42);
}

TEST_CASE("uniform variates stay inside the open unit interval") {
    RandomStream rs(StreamKey{1, 1}, 0);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rs.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("normal variates have unit variance") {
    RandomStream rs(StreamKey{2, 1}, 0);
    double s = 0.0, s2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = rs.normal();
        s += z;
        s2 += z * z;
    }
    CHECK(std::abs(s / n) < 0.01);
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("sampling does not depend on the worker count") {
    const Source src = Source::symmetric_stable(0.7);
    parallel::set_threads(1);
    const auto one = sample(src, 50000, 99);
    parallel::set_threads(4);
    const auto four = sample(src, 50000, 99);
    parallel::set_threads(1);
    CHECK(one == four);
}

TEST_CASE("clopper-pearson intervals") {
    const auto i = clopper_pearson(0, 100, 0.95);
    CHECK(i.lower == 0.0);
    CHECK(i.upper == doctest::Approx(0.0362).epsilon(0.01));
    const auto full = clopper_pearson(100, 100, 0.95);
    CHECK(full.upper == 1.0);
    CHECK(full.lower == doctest::Approx(0.9638).epsilon(0.001));
    const auto mid = clopper_pearson(50, 100, 0.95);
    CHECK(mid.lower == doctest::Approx(0.3983).epsilon(0.001));
    CHECK(mid.upper == doctest::Approx(0.6017).epsilon(0.001));
}
