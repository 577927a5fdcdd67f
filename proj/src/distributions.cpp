#include "symdom/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "symdom/parallel.hpp"

namespace symdom {
namespace {

bool is_origin(const Vector& v) {
    return std::all_of(v.begin(), v.end(), [](double c) { return c == 0.0; });
}

Vector negated(const Vector& v) {
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] == 0.0 ? 0.0 : -v[i];
    return out;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
        return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

}  // namespace

FiniteSupportDist::FiniteSupportDist(std::size_t dim, std::vector<Atom> atoms)
    : dim_(dim), atoms_(std::move(atoms)) {
    check_dimension(dim, "FiniteSupportDist");
    if (atoms_.empty()) throw ParameterError("FiniteSupportDist: no atoms");
    double total = 0.0;
    for (auto& a : atoms_) {
        if (a.at.size() != dim) throw ParameterError("FiniteSupportDist: atom has wrong dimension");
        for (auto& c : a.at) {
            if (!std::isfinite(c)) throw ParameterError("FiniteSupportDist: non-finite atom");
            if (c == 0.0) c = 0.0;  // drop negative zeros
        }
        if (!(a.probability > 0.0 && a.probability <= 1.0))
            throw ParameterError("FiniteSupportDist: probabilities must lie in (0,1]");
        total += a.probability;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw ParameterError("FiniteSupportDist: probabilities sum to " + std::to_string(total));

    std::vector<std::size_t> order(atoms_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return atoms_[x].at < atoms_[y].at; });
    for (std::size_t i = 1; i < order.size(); ++i)
        if (atoms_[order[i]].at == atoms_[order[i - 1]].at)
            throw ParameterError("FiniteSupportDist: duplicate atom location");

    for (const auto& a : atoms_) {
        if (is_origin(a.at)) continue;
        const Vector mirror = negated(a.at);
        auto it = std::lower_bound(order.begin(), order.end(), mirror,
                                   [&](std::size_t x, const Vector& v) { return atoms_[x].at < v; });
        if (it == order.end() || atoms_[*it].at != mirror)
            throw ParameterError("FiniteSupportDist: law is not symmetric (missing -v)");
        if (std::abs(atoms_[*it].probability - a.probability) > 1e-14 * a.probability)
            throw ParameterError("FiniteSupportDist: law is not symmetric (unequal mass at -v)");
    }
}

FiniteSupportDist FiniteSupportDist::symmetric(std::size_t dim, const std::vector<Atom>& half,
                                               double zero_mass) {
    std::vector<Atom> atoms;
    for (const auto& a : half) {
        if (is_origin(a.at)) throw ParameterError("FiniteSupportDist::symmetric: origin listed as a pair");
        atoms.push_back(a);
        atoms.push_back(Atom{negated(a.at), a.probability});
    }
    if (zero_mass > 0.0) atoms.push_back(Atom{Vector(dim, 0.0), zero_mass});
    return FiniteSupportDist(dim, std::move(atoms));
}

FiniteSupportDist FiniteSupportDist::rademacher(double magnitude) {
    if (magnitude == 0.0) return point_mass_at_origin(1);
    return symmetric(1, {Atom{{magnitude}, 0.5}});
}

FiniteSupportDist FiniteSupportDist::point_mass_at_origin(std::size_t dim) {
    return FiniteSupportDist(dim, {Atom{Vector(dim, 0.0), 1.0}});
}

FiniteSupportDist FiniteSupportDist::scaled(double factor) const {
    if (!std::isfinite(factor)) throw ParameterError("FiniteSupportDist::scaled: non-finite factor");
    if (factor == 0.0) return point_mass_at_origin(dim_);
    std::vector<Atom> atoms = atoms_;
    for (auto& a : atoms)
        for (auto& c : a.at) c *= factor;
    return FiniteSupportDist(dim_, std::move(atoms));
}

FiniteSupportDist thin_exact(const FiniteSupportDist& dist, double keep) {
    if (!(keep > 0.0 && keep <= 1.0)) throw ParameterError("thin: keep-probability must lie in (0,1]");
    if (keep == 1.0) return dist;
    std::vector<Atom> atoms;
    double origin = 1.0 - keep;
    for (const auto& a : dist.atoms()) {
        if (is_origin(a.at))
            origin += keep * a.probability;
        else
            atoms.push_back(Atom{a.at, keep * a.probability});
    }
    atoms.push_back(Atom{Vector(dist.dimension(), 0.0), origin});
    return FiniteSupportDist(dist.dimension(), std::move(atoms));
}

// ---------------------------------------------------------------------------

struct Source::Node {
    Family family = Family::finite;
    std::size_t dim = 1;
    std::optional<FiniteSupportDist> dist;
    std::vector<double> cumulative;
    Eigen::MatrixXd covariance;
    Eigen::MatrixXd factor;
    double index = 2.0;
    double scale = 1.0;
    double exponent = 1.0;
    double keep = 1.0;
    double multiplier = 1.0;
    std::vector<Source> parts;
};

Source Source::finite(FiniteSupportDist dist) {
    auto node = std::make_shared<Node>();
    node->family = Family::finite;
    node->dim = dist.dimension();
    double running = 0.0;
    for (const auto& a : dist.atoms()) {
        running += a.probability;
        node->cumulative.push_back(running);
    }
    node->dist = std::move(dist);
    return Source(std::move(node));
}

Source Source::gaussian(const Eigen::MatrixXd& covariance) {
    const auto dim = static_cast<std::size_t>(covariance.rows());
    check_dimension(dim, "gaussian source");
    if (covariance.cols() != covariance.rows())
        throw ParameterError("gaussian source: covariance must be square");
    const double scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
    if (!((covariance - covariance.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale))
        throw ParameterError("gaussian source: covariance must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() < -1e-12 * scale)
        throw ParameterError("gaussian source: covariance must be positive semidefinite");
    auto node = std::make_shared<Node>();
    node->family = Family::gaussian;
    node->dim = dim;
    node->covariance = covariance;
    node->factor = eig.eigenvectors() *
                   eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    return Source(std::move(node));
}

Source Source::symmetric_stable(double index, double scale) {
    if (!(index > 0.0 && index <= 2.0))
        throw ParameterError("symmetric_stable: stability index must lie in (0,2]");
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw ParameterError("symmetric_stable: scale must be positive");
    auto node = std::make_shared<Node>();
    node->family = Family::symmetric_stable;
    node->index = index;
    node->scale = scale;
    return Source(std::move(node));
}

Source Source::pareto_tail(double exponent) {
    if (!(exponent > 0.0) || !std::isfinite(exponent))
        throw ParameterError("pareto_tail: exponent must be positive");
    auto node = std::make_shared<Node>();
    node->family = Family::pareto_tail;
    node->exponent = exponent;
    return Source(std::move(node));
}

Source Source::bernoulli_thinned(const Source& inner, double keep) {
    if (!(keep > 0.0 && keep <= 1.0)) throw ParameterError("thin: keep-probability must lie in (0,1]");
    auto node = std::make_shared<Node>();
    node->family = Family::bernoulli_thinned;
    node->dim = inner.dimension();
    node->keep = keep;
    node->parts = {inner};
    return Source(std::move(node));
}

Source Source::scaled(const Source& inner, double factor) {
    if (!std::isfinite(factor)) throw ParameterError("scaled source: factor must be finite");
    auto node = std::make_shared<Node>();
    node->family = Family::scaled;
    node->dim = inner.dimension();
    node->multiplier = factor;
    node->parts = {inner};
    return Source(std::move(node));
}

Source Source::iid_product(const std::vector<Source>& parts) {
    if (parts.empty()) throw ParameterError("iid_product: no parts");
    auto node = std::make_shared<Node>();
    node->family = Family::iid_product;
    node->dim = 0;
    for (const auto& p : parts) node->dim += p.dimension();
    check_dimension(node->dim, "iid_product");
    node->parts = parts;
    return Source(std::move(node));
}

std::size_t Source::dimension() const noexcept { return node_->dim; }

Source::Family Source::family() const noexcept { return node_->family; }

std::string Source::describe() const {
    std::ostringstream os;
    const Node& n = *node_;
    switch (n.family) {
        case Family::finite: os << "finite[" << n.dist->size() << " atoms, d=" << n.dim << "]"; break;
        case Family::gaussian: os << "gaussian[d=" << n.dim << "]"; break;
        case Family::symmetric_stable: os << "stable(" << n.index << "," << n.scale << ")"; break;
        case Family::pareto_tail: os << "pareto(" << n.exponent << ")"; break;
        case Family::bernoulli_thinned: os << "thin(" << n.parts[0].describe() << "," << n.keep << ")"; break;
        case Family::scaled: os << n.multiplier << "*" << n.parts[0].describe(); break;
        case Family::iid_product: {
            os << "product(";
            for (std::size_t i = 0; i < n.parts.size(); ++i) os << (i ? "," : "") << n.parts[i].describe();
            os << ")";
            break;
        }
    }
    return os.str();
}

void Source::sample(RandomStream& rs, double* out) const {
    const Node& n = *node_;
    switch (n.family) {
        case Family::finite: {
            const double u = rs.uniform() * n.cumulative.back();
            auto it = std::upper_bound(n.cumulative.begin(), n.cumulative.end(), u);
            const std::size_t k = std::min<std::size_t>(it - n.cumulative.begin(), n.cumulative.size() - 1);
            std::copy(n.dist->atoms()[k].at.begin(), n.dist->atoms()[k].at.end(), out);
            return;
        }
        case Family::gaussian: {
            double z[kMaxDimension];
            for (std::size_t i = 0; i < n.dim; ++i) z[i] = rs.normal();
            for (std::size_t i = 0; i < n.dim; ++i) {
                double s = 0.0;
                for (std::size_t k = 0; k < n.dim; ++k) s += n.factor(i, k) * z[k];
                out[i] = s;
            }
            return;
        }
        case Family::symmetric_stable: {
            // Chambers-Mallows-Stuck with skewness 0.
            const double v = std::numbers::pi * (rs.uniform() - 0.5);
            const double w = rs.exponential();
            const double a = n.index;
            double x;
            if (a == 1.0) {
                x = std::tan(v);
            } else {
                x = std::sin(a * v) / std::pow(std::cos(v), 1.0 / a) *
                    std::pow(std::cos((1.0 - a) * v) / w, (1.0 - a) / a);
            }
            out[0] = n.scale * x;
            return;
        }
        case Family::pareto_tail: {
            const double magnitude = std::pow(rs.uniform(), -1.0 / n.exponent);
            out[0] = rs.sign() * magnitude;
            return;
        }
        case Family::bernoulli_thinned: {
            if (rs.uniform() < n.keep)
                n.parts[0].sample(rs, out);
            else
                std::fill(out, out + n.dim, 0.0);
            return;
        }
        case Family::scaled: {
            n.parts[0].sample(rs, out);
            for (std::size_t i = 0; i < n.dim; ++i) out[i] *= n.multiplier;
            return;
        }
        case Family::iid_product: {
            for (const auto& p : n.parts) {
                p.sample(rs, out);
                out += p.dimension();
            }
            return;
        }
    }
}

std::optional<FiniteSupportDist> Source::exact(std::uint64_t cap) const {
    const Node& n = *node_;
    switch (n.family) {
        case Family::finite:
            if (n.dist->size() > cap) return std::nullopt;
            return n.dist;
        case Family::bernoulli_thinned: {
            auto inner = n.parts[0].exact(cap);
            if (!inner || inner->size() + 1 > cap) return std::nullopt;
            return thin_exact(*inner, n.keep);
        }
        case Family::scaled: {
            auto inner = n.parts[0].exact(cap);
            if (!inner) return std::nullopt;
            return inner->scaled(n.multiplier);
        }
        case Family::iid_product: {
            std::vector<FiniteSupportDist> parts;
            std::uint64_t total = 1;
            for (const auto& p : n.parts) {
                auto e = p.exact(cap);
                if (!e) return std::nullopt;
                total = saturating_mul(total, e->size());
                if (total > cap) return std::nullopt;
                parts.push_back(std::move(*e));
            }
            std::vector<Atom> atoms;
            for_each_outcome(parts, cap, [&](std::span<const double> coords, double p) {
                atoms.push_back(Atom{Vector(coords.begin(), coords.end()), p});
            });
            return FiniteSupportDist(n.dim, std::move(atoms));
        }
        default: return std::nullopt;
    }
}

bool Source::has_survival() const { return survival(1.0).has_value(); }

std::optional<double> Source::survival(double t) const {
    const Node& n = *node_;
    if (n.dim != 1) return std::nullopt;
    if (t < 0.0) return 1.0;
    switch (n.family) {
        case Family::finite: {
            double s = 0.0;
            for (const auto& a : n.dist->atoms())
                if (std::abs(a.at[0]) > t) s += a.probability;
            return s;
        }
        case Family::gaussian: {
            const double sigma = std::sqrt(n.covariance(0, 0));
            if (sigma == 0.0) return 0.0;
            return std::erfc(t / (sigma * std::numbers::sqrt2));
        }
        case Family::symmetric_stable: {
            const double u = t / n.scale;
            if (n.index == 0.5) return half_stable_tail(u);
            if (n.index == 1.0) return 1.0 - 2.0 / std::numbers::pi * std::atan(u);
            if (n.index == 2.0) return std::erfc(u / 2.0);
            return std::nullopt;
        }
        case Family::pareto_tail: return t < 1.0 ? 1.0 : std::pow(t, -n.exponent);
        case Family::bernoulli_thinned: {
            auto inner = n.parts[0].survival(t);
            if (!inner) return std::nullopt;
            return n.keep * *inner;
        }
        case Family::scaled: {
            if (n.multiplier == 0.0) return 0.0;
            return n.parts[0].survival(t / std::abs(n.multiplier));
        }
        case Family::iid_product: return n.parts[0].survival(t);
    }
    return std::nullopt;
}

Source thin(const Source& source, double keep) { return Source::bernoulli_thinned(source, keep); }

std::vector<double> sample(const Source& source, std::uint64_t count, std::uint64_t seed) {
    if (count == 0) throw ParameterError("sample: count must be >= 1");
    const std::size_t dim = source.dimension();
    std::vector<double> out(count * dim);
    const StreamKey key = StreamKey{seed, 0}.child("distributions.sample");
    parallel::for_each_index(parallel::chunk_count(count), [&](std::uint64_t chunk) {
        RandomStream rs(key, static_cast<std::uint32_t>(chunk));
        const std::uint64_t begin = chunk * parallel::kChunkSize;
        const std::uint64_t len = parallel::chunk_length(count, chunk);
        for (std::uint64_t i = 0; i < len; ++i) source.sample(rs, out.data() + (begin + i) * dim);
    });
    return out;
}

// ---------------------------------------------------------------------------

ProductLaw::ProductLaw(std::vector<Source> components) : components_(std::move(components)) {
    if (components_.empty()) throw ParameterError("ProductLaw: needs at least one component");
    for (const auto& c : components_)
        if (c.dimension() != components_.front().dimension())
            throw ParameterError("ProductLaw: components differ in dimension");
}

std::optional<std::vector<FiniteSupportDist>> ProductLaw::exact_components(std::uint64_t cap) const {
    std::vector<FiniteSupportDist> out;
    out.reserve(components_.size());
    for (const auto& c : components_) {
        auto e = c.exact(cap);
        if (!e) return std::nullopt;
        out.push_back(std::move(*e));
    }
    return out;
}

std::uint64_t ProductLaw::support_size(std::uint64_t cap) const {
    std::uint64_t total = 1;
    for (const auto& c : components_) {
        auto e = c.exact(cap);
        if (!e) return 0;
        total = saturating_mul(total, e->size());
    }
    return total;
}

void ProductLaw::sample_components(RandomStream& rs, double* out) const {
    const std::size_t dim = dimension();
    for (std::size_t i = 0; i < components_.size(); ++i) components_[i].sample(rs, out + i * dim);
}

void for_each_outcome(const std::vector<FiniteSupportDist>& components, std::uint64_t cap,
                      const std::function<void(std::span<const double>, double)>& visit) {
    if (components.empty()) throw ParameterError("enumerate: no components");
    const std::size_t dim = components.front().dimension();
    std::uint64_t total = 1;
    for (const auto& c : components) {
        if (c.dimension() != dim) throw ParameterError("enumerate: components differ in dimension");
        total = saturating_mul(total, c.size());
    }
    if (total > cap) throw CapacityError("enumerate: product support size exceeds cap", total, cap);

    const std::size_t n = components.size();
    std::vector<std::size_t> index(n, 0);
    std::vector<double> coords(n * dim);
    for (std::size_t i = 0; i < n; ++i)
        std::copy(components[i].atoms()[0].at.begin(), components[i].atoms()[0].at.end(),
                  coords.begin() + i * dim);
    for (;;) {
        double p = 1.0;
        for (std::size_t i = 0; i < n; ++i) p *= components[i].atoms()[index[i]].probability;
        visit(coords, p);
        std::size_t i = n;
        bool wrapped = true;
        while (i-- > 0) {
            if (++index[i] < components[i].size()) {
                wrapped = false;
                break;
            }
            index[i] = 0;
        }
        if (wrapped) return;
        for (std::size_t k = i; k < n; ++k) {
            const auto& at = components[k].atoms()[index[k]].at;
            std::copy(at.begin(), at.end(), coords.begin() + k * dim);
        }
    }
}

std::vector<Outcome> enumerate(const ProductLaw& law, std::uint64_t cap) {
    auto parts = law.exact_components(cap);
    if (!parts) throw ParameterError("enumerate: every component must have finite support");
    const std::size_t dim = law.dimension();
    std::vector<Outcome> out;
    for_each_outcome(*parts, cap, [&](std::span<const double> coords, double p) {
        Outcome o;
        o.probability = p;
        for (std::size_t i = 0; i < parts->size(); ++i)
            o.parts.emplace_back(coords.begin() + i * dim, coords.begin() + (i + 1) * dim);
        out.push_back(std::move(o));
    });
    return out;
}

std::optional<WeightedPoints> exact_sum(const ProductLaw& law, std::uint64_t cap) {
    const std::uint64_t support = law.support_size(cap);
    if (support == 0 || support > cap) return std::nullopt;
    auto parts = law.exact_components(cap);
    WeightedPoints pts;
    pts.dim = law.dimension();
    pts.coords.reserve(support * pts.dim);
    pts.weights.reserve(support);
    const std::size_t n = parts->size();
    for_each_outcome(*parts, cap, [&](std::span<const double> coords, double p) {
        for (std::size_t k = 0; k < pts.dim; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += coords[i * pts.dim + k];
            pts.coords.push_back(s);
        }
        pts.weights.push_back(p);
    });
    return pts;
}

// ---------------------------------------------------------------------------

SplitScheme::SplitScheme(double kappa, std::size_t n) : n_(n) {
    if (!(kappa >= 1.0) || !std::isfinite(kappa)) throw ParameterError("split_scheme: kappa must be >= 1");
    if (n == 0) throw ParameterError("split_scheme: n must be >= 1");
    m_ = static_cast<std::size_t>(std::ceil(kappa));
}

bool SplitScheme::indicator(std::size_t i, std::size_t k, std::span<const double> t) const {
    if (i >= n_ || t.size() != n_) throw ParameterError("split_scheme: index out of range");
    if (k < 1 || k > m_) throw ParameterError("split_scheme: piece index out of range");
    const double x = t[i];
    if (!(x >= 0.0 && x <= 1.0)) throw ParameterError("split_scheme: t must lie in [0,1]^n");
    const auto piece = std::min<std::size_t>(m_ - 1, static_cast<std::size_t>(std::floor(x * m_)));
    return piece + 1 == k;
}

SplitScheme split_scheme(double kappa, std::size_t n) { return SplitScheme(kappa, n); }

double half_stable_tail(double t) {
    if (t <= 0.0) return 1.0;
    constexpr double c = 0.25;
    auto integrand = [t](double z) {
        const double z2 = z * z;
        const double phi = std::exp(-0.5 * z2) / std::sqrt(2.0 * std::numbers::pi);
        return phi * std::erf(std::sqrt(c * z2 / (2.0 * (t * z2 + c))));
    };
    const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-14);
    return 4.0 * integral;
}

}  // namespace symdom
