#include "symdom/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace symdom::fixtures {

std::size_t uniform_index(RandomStream& rs, std::size_t count) {
    return static_cast<std::size_t>(rs.uniform() * static_cast<double>(count)) % count;
}

double coordinate(RandomStream& rs) {
    if (rs.uniform() < 0.5) return static_cast<double>(static_cast<int>(uniform_index(rs, 17)) - 8) / 4.0;
    return 4.0 * rs.uniform() - 2.0;
}

namespace {

bool same_or_opposite(const Vector& u, const Vector& v) {
    bool same = true;
    bool opposite = true;
    for (std::size_t k = 0; k < u.size(); ++k) {
        same = same && u[k] == v[k];
        opposite = opposite && u[k] == -v[k];
    }
    return same || opposite;
}

bool is_zero(const Vector& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

FiniteSupportDist random_finite(RandomStream& rs, std::size_t dim, std::size_t max_pairs) {
    const std::size_t pairs = 1 + uniform_index(rs, max_pairs);
    std::vector<Vector> points;
    while (points.size() < pairs) {
        Vector v(dim);
        for (auto& c : v) c = coordinate(rs);
        if (is_zero(v)) continue;
        if (std::any_of(points.begin(), points.end(), [&](const Vector& u) { return same_or_opposite(u, v); }))
            continue;
        points.push_back(std::move(v));
    }
    std::vector<double> w(pairs + 1);
    for (auto& x : w) x = 0.1 + rs.uniform();
    if (rs.uniform() < 0.5) w.back() = 0.0;
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    std::vector<Atom> half;
    double used = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
        const double p = w[i] / total / 2.0;
        half.push_back({points[i], p});
        used += 2.0 * p;
    }
    return FiniteSupportDist::symmetric(dim, half, std::max(0.0, 1.0 - used));
}

ProductLaw random_finite_law(RandomStream& rs, std::size_t max_n, std::size_t max_dim, std::size_t max_pairs) {
    const std::size_t n = 1 + uniform_index(rs, max_n);
    const std::size_t dim = 1 + uniform_index(rs, max_dim);
    std::vector<Source> parts;
    for (std::size_t i = 0; i < n; ++i) parts.push_back(Source::finite(random_finite(rs, dim, max_pairs)));
    return ProductLaw(std::move(parts));
}

Norm random_norm(RandomStream& rs, std::size_t dim) {
    NormFamilyMix mix;
    mix.max_condition = 20.0;
    const auto family = random_norm_family(rs.bits(), dim, 8, mix);
    return family[uniform_index(rs, family.size())];
}

SignInstance random_sign_instance(RandomStream& rs, std::size_t max_n, std::size_t max_dim) {
    const std::size_t n = 1 + uniform_index(rs, max_n);
    const std::size_t dim = 1 + uniform_index(rs, max_dim);
    SignInstance inst{{}, random_norm(rs, dim)};
    for (std::size_t i = 0; i < n; ++i) {
        Vector v(dim);
        for (auto& c : v) c = coordinate(rs);
        inst.vectors.push_back(std::move(v));
    }
    return inst;
}

std::pair<std::vector<double>, std::vector<double>> random_majorised_pair(RandomStream& rs, std::size_t max_n) {
    const std::size_t n = 1 + uniform_index(rs, max_n);
    std::vector<double> b(n);
    for (auto& x : b) x = coordinate(rs);
    std::vector<double> a(n, 0.0);
    const std::size_t terms = 1 + uniform_index(rs, 4);
    std::vector<double> w(terms);
    for (auto& x : w) x = 0.05 + rs.uniform();
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    std::vector<std::size_t> perm(n);
    for (std::size_t t = 0; t < terms; ++t) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[uniform_index(rs, i)]);
        for (std::size_t i = 0; i < n; ++i) a[i] += w[t] / total * b[perm[i]];
    }
    return {a, b};
}

Eigen::MatrixXd random_spd(RandomStream& rs, std::size_t dim, double lo, double hi) {
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd g(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) g(i, j) = rs.normal();
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    const Eigen::MatrixXd q = qr.householderQ();
    Eigen::VectorXd ev(d);
    for (Eigen::Index i = 0; i < d; ++i) ev(i) = lo + (hi - lo) * rs.uniform();
    Eigen::MatrixXd m = q * ev.asDiagonal() * q.transpose();
    return 0.5 * (m + m.transpose());
}

std::vector<SourcePair> gaussian_pairs(RandomStream& rs, std::size_t count, std::size_t dim) {
    std::vector<SourcePair> out;
    for (std::size_t i = 0; i < count; ++i) {
        const Eigen::MatrixXd sx = random_spd(rs, dim, 0.05, 0.3);
        const auto d = static_cast<Eigen::Index>(dim);
        Eigen::VectorXd u(d);
        for (Eigen::Index k = 0; k < d; ++k) u(k) = rs.normal();
        const Eigen::MatrixXd extra = 0.1 * u * u.transpose() + random_spd(rs, dim, 0.0, 0.1);
        out.emplace_back(Source::gaussian(sx), Source::gaussian(sx + extra));
    }
    return out;
}

}  // namespace symdom::fixtures
