#include "symdom/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "symdom/core.hpp"
#include "symdom/rng.hpp"

namespace symdom {

struct Norm::Impl {
    Kind kind = Kind::lp;
    std::size_t dim = 1;
    double p = 2.0;
    std::vector<double> weights;
    std::vector<double> matrix;      // row-major dim x dim
    std::vector<double> directions;  // row-major count x dim
    std::size_t count = 0;
    std::shared_ptr<const Impl> inner;
    double factor = 1.0;
};

namespace {

void check_exponent(double p) {
    if (!(p >= 1.0)) throw ParameterError("lp norm: exponent must be >= 1 (or inf)");
}

double lp_value(const double* x, std::size_t dim, double p, const double* w) noexcept {
    auto coord = [&](std::size_t i) { return std::abs(w ? w[i] * x[i] : x[i]); };
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < dim; ++i) m = std::max(m, coord(i));
        return m;
    }
    if (p == 1.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < dim; ++i) s += coord(i);
        return s;
    }
    if (p == 2.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < dim; ++i) s += coord(i) * coord(i);
        return std::sqrt(s);
    }
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) s += std::pow(coord(i), p);
    return std::pow(s, 1.0 / p);
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::string exponent_name(double p) {
    if (std::isinf(p)) return "inf";
    return format_double(p);
}

nlohmann::json exponent_json(double p) {
    if (std::isinf(p)) return "inf";
    return p;
}

double exponent_from_json(const nlohmann::json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        throw ParameterError("norm: exponent must be a number or \"inf\"");
    }
    return j.get<double>();
}

}  // namespace

Norm Norm::lp(std::size_t dim, double p) {
    check_dimension(dim, "lp norm");
    check_exponent(p);
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::lp;
    impl->dim = dim;
    impl->p = p;
    return Norm(std::move(impl));
}

Norm Norm::weighted_lp(double p, std::vector<double> weights) {
    check_dimension(weights.size(), "weighted lp norm");
    check_exponent(p);
    for (double w : weights)
        if (!(w > 0.0) || !std::isfinite(w))
            throw ParameterError("weighted lp norm: weights must be positive and finite");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::weighted_lp;
    impl->dim = weights.size();
    impl->p = p;
    impl->weights = std::move(weights);
    return Norm(std::move(impl));
}

Norm Norm::ellipsoid(const Eigen::MatrixXd& a) {
    const auto dim = static_cast<std::size_t>(a.rows());
    check_dimension(dim, "ellipsoid norm");
    if (a.cols() != a.rows()) throw ParameterError("ellipsoid norm: matrix must be square");
    const double scale = a.cwiseAbs().maxCoeff();
    if (!((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, scale)))
        throw ParameterError("ellipsoid norm: matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
    if (eig.info() != Eigen::Success || !(eig.eigenvalues().minCoeff() > 0.0))
        throw ParameterError("ellipsoid norm: matrix must be positive definite");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::ellipsoid;
    impl->dim = dim;
    impl->matrix.resize(dim * dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            impl->matrix[i * dim + j] = 0.5 * (a(i, j) + a(j, i));
    return Norm(std::move(impl));
}

Norm Norm::polytope_gauge(const std::vector<std::vector<double>>& directions) {
    if (directions.empty()) throw ParameterError("polytope gauge: no directions");
    const std::size_t dim = directions.front().size();
    check_dimension(dim, "polytope gauge");
    Eigen::MatrixXd u(directions.size(), dim);
    for (std::size_t j = 0; j < directions.size(); ++j) {
        if (directions[j].size() != dim)
            throw ParameterError("polytope gauge: directions differ in dimension");
        for (std::size_t i = 0; i < dim; ++i) {
            if (!std::isfinite(directions[j][i]))
                throw ParameterError("polytope gauge: non-finite direction");
            u(j, i) = directions[j][i];
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(u);
    if (static_cast<std::size_t>(lu.rank()) < dim)
        throw ParameterError("polytope gauge: directions must span R^d");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::polytope_gauge;
    impl->dim = dim;
    impl->count = directions.size();
    for (const auto& d : directions) impl->directions.insert(impl->directions.end(), d.begin(), d.end());
    return Norm(std::move(impl));
}

Norm Norm::scaled(const Norm& inner, double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor))
        throw ParameterError("scaled norm: factor must be positive and finite");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::scaled;
    impl->dim = inner.dimension();
    impl->inner = inner.impl_;
    impl->factor = factor;
    return Norm(std::move(impl));
}

std::size_t Norm::dimension() const noexcept { return impl_->dim; }

Norm::Kind Norm::kind() const noexcept { return impl_->kind; }

namespace {

double evaluate_impl(const Norm::Impl& n, const double* x) noexcept {
    switch (n.kind) {
        case Norm::Kind::lp: return lp_value(x, n.dim, n.p, nullptr);
        case Norm::Kind::weighted_lp: return lp_value(x, n.dim, n.p, n.weights.data());
        case Norm::Kind::ellipsoid: {
            double q = 0.0;
            for (std::size_t i = 0; i < n.dim; ++i) {
                const double* row = n.matrix.data() + i * n.dim;
                double r = 0.0;
                for (std::size_t j = 0; j < n.dim; ++j) r += row[j] * x[j];
                q += x[i] * r;
            }
            return std::sqrt(std::max(q, 0.0));
        }
        case Norm::Kind::polytope_gauge: {
            double m = 0.0;
            for (std::size_t k = 0; k < n.count; ++k) {
                const double* u = n.directions.data() + k * n.dim;
                double dot = 0.0;
                for (std::size_t i = 0; i < n.dim; ++i) dot += u[i] * x[i];
                m = std::max(m, std::abs(dot));
            }
            return m;
        }
        case Norm::Kind::scaled: return n.factor * evaluate_impl(*n.inner, x);
    }
    return 0.0;
}

std::string describe_impl(const Norm::Impl& n) {
    switch (n.kind) {
        case Norm::Kind::lp: return "l" + exponent_name(n.p);
        case Norm::Kind::weighted_lp: return "weighted_l" + exponent_name(n.p);
        case Norm::Kind::ellipsoid: return "ellipsoid";
        case Norm::Kind::polytope_gauge: return "polytope[" + std::to_string(n.count) + "]";
        case Norm::Kind::scaled:
            return format_double(n.factor) + "*" + describe_impl(*n.inner);
    }
    return "?";
}

nlohmann::json json_impl(const Norm::Impl& n) {
    nlohmann::json j;
    switch (n.kind) {
        case Norm::Kind::lp:
            j = {{"type", "lp"}, {"dimension", n.dim}, {"p", exponent_json(n.p)}};
            break;
        case Norm::Kind::weighted_lp:
            j = {{"type", "weighted_lp"}, {"p", exponent_json(n.p)}, {"weights", n.weights}};
            break;
        case Norm::Kind::ellipsoid: {
            auto rows = nlohmann::json::array();
            for (std::size_t i = 0; i < n.dim; ++i)
                rows.push_back(std::vector<double>(n.matrix.begin() + i * n.dim,
                                                   n.matrix.begin() + (i + 1) * n.dim));
            j = {{"type", "ellipsoid"}, {"matrix", rows}};
            break;
        }
        case Norm::Kind::polytope_gauge: {
            auto rows = nlohmann::json::array();
            for (std::size_t k = 0; k < n.count; ++k)
                rows.push_back(std::vector<double>(n.directions.begin() + k * n.dim,
                                                   n.directions.begin() + (k + 1) * n.dim));
            j = {{"type", "polytope"}, {"directions", rows}};
            break;
        }
        case Norm::Kind::scaled:
            j = {{"type", "scaled"}, {"factor", n.factor}, {"inner", json_impl(*n.inner)}};
            break;
    }
    return j;
}

}  // namespace

double Norm::evaluate(const double* x) const noexcept { return evaluate_impl(*impl_, x); }

double Norm::operator()(std::span<const double> x) const {
    if (x.size() != impl_->dim)
        throw ParameterError("norm evaluation: expected dimension " + std::to_string(impl_->dim) +
                             ", got " + std::to_string(x.size()));
    return evaluate_impl(*impl_, x.data());
}

std::string Norm::describe() const { return describe_impl(*impl_); }

nlohmann::json Norm::to_json() const { return json_impl(*impl_); }

Norm Norm::from_json(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "lp") return lp(j.at("dimension").get<std::size_t>(), exponent_from_json(j.at("p")));
    if (type == "weighted_lp")
        return weighted_lp(exponent_from_json(j.at("p")), j.at("weights").get<std::vector<double>>());
    if (type == "ellipsoid") {
        const auto rows = j.at("matrix").get<std::vector<std::vector<double>>>();
        Eigen::MatrixXd a(rows.size(), rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.size()) throw ParameterError("ellipsoid: matrix must be square");
            for (std::size_t k = 0; k < rows.size(); ++k) a(i, k) = rows[i][k];
        }
        return ellipsoid(a);
    }
    if (type == "polytope")
        return polytope_gauge(j.at("directions").get<std::vector<std::vector<double>>>());
    if (type == "scaled") return scaled(from_json(j.at("inner")), j.at("factor").get<double>());
    throw ParameterError("unknown norm type '" + type + "'");
}

namespace {

Norm random_ellipsoid(RandomStream& rs, std::size_t dim, double max_condition) {
    Eigen::MatrixXd g(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t k = 0; k < dim; ++k) g(i, k) = rs.normal();
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
    const double half_span = 0.5 * std::log(max_condition);
    Eigen::VectorXd eig(dim);
    for (std::size_t i = 0; i < dim; ++i) eig(i) = std::exp(half_span * (2.0 * rs.uniform() - 1.0));
    Eigen::MatrixXd a = q * eig.asDiagonal() * q.transpose();
    a = 0.5 * (a + a.transpose()).eval();
    return Norm::ellipsoid(a);
}

Norm random_polytope(RandomStream& rs, std::size_t dim) {
    for (;;) {
        const std::size_t m = dim + static_cast<std::size_t>(rs.uniform() * (3 * dim + 1));
        std::vector<std::vector<double>> dirs(std::min(m, 4 * dim), std::vector<double>(dim));
        for (auto& d : dirs) {
            double len = 0.0;
            for (auto& c : d) {
                c = rs.normal();
                len += c * c;
            }
            len = std::sqrt(len);
            for (auto& c : d) c /= len;
        }
        Eigen::MatrixXd u(dirs.size(), dim);
        for (std::size_t j = 0; j < dirs.size(); ++j)
            for (std::size_t i = 0; i < dim; ++i) u(j, i) = dirs[j][i];
        Eigen::FullPivLU<Eigen::MatrixXd> lu(u);
        lu.setThreshold(1e-6);
        if (static_cast<std::size_t>(lu.rank()) == dim) return Norm::polytope_gauge(dirs);
    }
}

double random_exponent(RandomStream& rs) {
    const double u = rs.uniform();
    if (u < 0.25) return 1.0;
    if (u < 0.5) return 2.0;
    if (u < 0.7) return std::numeric_limits<double>::infinity();
    return 1.0 + 7.0 * rs.uniform();
}

Norm random_weighted(RandomStream& rs, std::size_t dim) {
    const double p = random_exponent(rs);
    std::vector<double> w(dim);
    for (auto& x : w) x = std::exp(std::log(2.0) * (2.0 * rs.uniform() - 1.0));
    return Norm::weighted_lp(p, std::move(w));
}

}  // namespace

std::vector<Norm> random_norm_family(std::uint64_t seed, std::size_t dim, std::size_t size,
                                     const NormFamilyMix& mix) {
    check_dimension(dim, "random_norm_family");
    if (size == 0) throw ParameterError("random_norm_family: size must be >= 1");
    if (!(mix.scale_min > 0.0) || !(mix.scale_max >= mix.scale_min))
        throw ParameterError("random_norm_family: need 0 < scale_min <= scale_max");
    if (!(mix.max_condition >= 1.0))
        throw ParameterError("random_norm_family: max_condition must be >= 1");

    std::vector<Norm> family;
    family.reserve(size);
    const double inf = std::numeric_limits<double>::infinity();
    for (double p : {2.0, 1.0, inf}) {
        if (family.size() == size) return family;
        family.push_back(Norm::lp(dim, p));
    }

    RandomStream rs(StreamKey{seed, 0}.child("geometry.norm_family", dim), 0);
    const double log_min = std::log(mix.scale_min);
    const double log_max = std::log(mix.scale_max);
    for (std::size_t index = family.size(); index < size; ++index) {
        Norm member = Norm::lp(dim, 2.0);
        switch (mix.kinds) {
            case NormFamilyMix::Kinds::lp_only:
                member = Norm::lp(dim, random_exponent(rs));
                break;
            case NormFamilyMix::Kinds::ellipsoid_only:
                member = random_ellipsoid(rs, dim, mix.max_condition);
                break;
            case NormFamilyMix::Kinds::polytope_only:
                member = random_polytope(rs, dim);
                break;
            case NormFamilyMix::Kinds::all:
                switch (index % 4) {
                    case 0: member = random_ellipsoid(rs, dim, mix.max_condition); break;
                    case 1: member = random_polytope(rs, dim); break;
                    case 2: member = random_weighted(rs, dim); break;
                    default: member = Norm::lp(dim, random_exponent(rs)); break;
                }
                break;
        }
        if (mix.scale_min != 1.0 || mix.scale_max != 1.0) {
            const double c = std::exp(log_min + (log_max - log_min) * rs.uniform());
            member = Norm::scaled(member, c);
        }
        family.push_back(std::move(member));
    }
    return family;
}

nlohmann::json family_to_json(const std::vector<Norm>& family) {
    auto arr = nlohmann::json::array();
    for (const auto& n : family) arr.push_back(n.to_json());
    return arr;
}

std::vector<Norm> family_from_json(const nlohmann::json& j) {
    std::vector<Norm> out;
    for (const auto& item : j) out.push_back(Norm::from_json(item));
    return out;
}

}  // namespace symdom
