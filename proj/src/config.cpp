#include "symdom/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "symdom/fixtures.hpp"
#include "symdom/majorisation.hpp"

namespace symdom {

ConfigError::ConfigError(const std::string& origin, int line, const std::string& message)
    : ParameterError(line > 0 ? origin + ":" + std::to_string(line) + ": " + message : origin + ": " + message),
      line_(line) {}

namespace {

constexpr std::pair<ExperimentKind, std::string_view> kKindNames[] = {
    {ExperimentKind::tail, "tail"},
    {ExperimentKind::domination, "domination"},
    {ExperimentKind::tensorize, "tensorize"},
    {ExperimentKind::wb, "wb"},
    {ExperimentKind::wb_sum, "wb-sum"},
    {ExperimentKind::majorize, "majorize"},
    {ExperimentKind::schur, "schur"},
    {ExperimentKind::counterexample, "counterexample"},
    {ExperimentKind::inequality_suite, "inequality-suite"},
    {ExperimentKind::recursion, "recursion"},
};

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
    for (const auto& [k, name] : kKindNames)
        if (k == kind) return name;
    return "?";
}

std::optional<ExperimentKind> parse_kind(std::string_view name) noexcept {
    for (const auto& [k, n] : kKindNames)
        if (n == name) return k;
    return std::nullopt;
}

const std::vector<ExperimentKind>& all_kinds() {
    static const std::vector<ExperimentKind> kinds = [] {
        std::vector<ExperimentKind> v;
        for (const auto& [k, n] : kKindNames) v.push_back(k);
        return v;
    }();
    return kinds;
}

namespace {

using Keys = std::initializer_list<std::string_view>;

class Parser {
public:
    explicit Parser(std::string origin) : origin_(std::move(origin)) {}

    [[noreturn]] void fail(const YAML::Node& at, const std::string& msg) const {
        const int line = at.IsDefined() && at.Mark().line >= 0 ? at.Mark().line + 1 : 0;
        throw ConfigError(origin_, line, msg);
    }

    void expect_map(const YAML::Node& n, const std::string& what) const {
        if (!n.IsMap()) fail(n, what + " must be a mapping");
    }

    /// Rejects keys outside `allowed`.
    void check_keys(const YAML::Node& n, const std::string& what, const std::set<std::string>& allowed) const {
        expect_map(n, what);
        for (const auto& kv : n) {
            const auto key = kv.first.as<std::string>();
            if (!allowed.count(key)) fail(kv.first, "unknown key '" + key + "' in " + what);
        }
    }

    YAML::Node require(const YAML::Node& n, const std::string& key, const std::string& what) const {
        const YAML::Node v = n[key];
        if (!v.IsDefined() || v.IsNull()) fail(n, "missing required key '" + key + "' in " + what);
        return v;
    }

    double number(const YAML::Node& v) const {
        if (!v.IsScalar()) fail(v, "expected a number");
        const auto s = v.Scalar();
        if (s == "inf" || s == ".inf" || s == "Inf") return std::numeric_limits<double>::infinity();
        try {
            return v.as<double>();
        } catch (const YAML::Exception&) {
            fail(v, "expected a number, got '" + s + "'");
        }
    }

    double number(const YAML::Node& n, const std::string& key, const std::string& what) const {
        return number(require(n, key, what));
    }

    double number_or(const YAML::Node& n, const std::string& key, double fallback) const {
        const YAML::Node v = n[key];
        return v.IsDefined() && !v.IsNull() ? number(v) : fallback;
    }

    std::uint64_t count(const YAML::Node& v) const {
        const double x = number(v);
        if (!(x >= 0.0) || x != std::floor(x) || x > 9.007199254740992e15)
            fail(v, "expected a nonnegative integer");
        return static_cast<std::uint64_t>(x);
    }

    std::uint64_t count_or(const YAML::Node& n, const std::string& key, std::uint64_t fallback) const {
        const YAML::Node v = n[key];
        return v.IsDefined() && !v.IsNull() ? count(v) : fallback;
    }

    bool flag_or(const YAML::Node& n, const std::string& key, bool fallback) const {
        const YAML::Node v = n[key];
        if (!v.IsDefined() || v.IsNull()) return fallback;
        try {
            return v.as<bool>();
        } catch (const YAML::Exception&) {
            fail(v, "expected true or false");
        }
    }

    std::string text(const YAML::Node& v) const {
        if (!v.IsScalar()) fail(v, "expected a string");
        return v.Scalar();
    }

    std::vector<double> numbers(const YAML::Node& v) const {
        if (!v.IsSequence()) fail(v, "expected a list of numbers");
        std::vector<double> out;
        for (const auto& e : v) out.push_back(number(e));
        return out;
    }

    std::vector<std::vector<double>> matrix(const YAML::Node& v) const {
        if (!v.IsSequence()) fail(v, "expected a list of rows");
        std::vector<std::vector<double>> rows;
        for (const auto& r : v) rows.push_back(numbers(r));
        return rows;
    }

    Eigen::MatrixXd eigen(const YAML::Node& v) const {
        const auto rows = matrix(v);
        if (rows.empty()) fail(v, "matrix is empty");
        Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows[0].size()) fail(v, "matrix rows have different lengths");
            for (std::size_t j = 0; j < rows[i].size(); ++j)
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
        return m;
    }

    /// Runs build(), converting library parameter errors into errors at `at`.
    template <class F>
    auto guarded(const YAML::Node& at, F&& build) const -> decltype(build()) {
        try {
            return build();
        } catch (const ConfigError&) {
            throw;
        } catch (const ParameterError& e) {
            fail(at, e.what());
        } catch (const CapacityError& e) {
            fail(at, e.what());
        }
    }

    // Sources -----------------------------------------------------------------

    FiniteSupportDist finite_dist(const YAML::Node& n) const {
        const auto dim = static_cast<std::size_t>(count(require(n, "dim", "finite source")));
        auto atoms_of = [&](const YAML::Node& list) {
            if (!list.IsSequence()) fail(list, "atoms must be a list");
            std::vector<Atom> atoms;
            for (const auto& a : list) {
                check_keys(a, "atom", {"at", "p"});
                atoms.push_back({numbers(require(a, "at", "atom")), number(a, "p", "atom")});
            }
            return atoms;
        };
        const bool has_atoms = n["atoms"].IsDefined();
        const bool has_half = n["half"].IsDefined();
        if (has_atoms == has_half) fail(n, "finite source needs exactly one of 'atoms' or 'half'");
        return guarded(n, [&] {
            if (has_atoms) return FiniteSupportDist(dim, atoms_of(n["atoms"]));
            return FiniteSupportDist::symmetric(dim, atoms_of(n["half"]), number_or(n, "zero_mass", 0.0));
        });
    }

    Source source(const YAML::Node& n) const {
        expect_map(n, "source");
        const std::string type = text(require(n, "type", "source"));
        if (type == "rademacher") {
            check_keys(n, "rademacher source", {"type", "magnitude"});
            const double m = number_or(n, "magnitude", 1.0);
            return guarded(n, [&] { return Source::finite(FiniteSupportDist::rademacher(m)); });
        }
        if (type == "finite") {
            check_keys(n, "finite source", {"type", "dim", "atoms", "half", "zero_mass"});
            return Source::finite(finite_dist(n));
        }
        if (type == "gaussian") {
            check_keys(n, "gaussian source", {"type", "cov", "sigma"});
            if (n["cov"].IsDefined() == n["sigma"].IsDefined())
                fail(n, "gaussian source needs exactly one of 'cov' or 'sigma'");
            if (n["sigma"].IsDefined()) {
                const double s = number(n["sigma"]);
                return guarded(n, [&] { return Source::gaussian(Eigen::MatrixXd::Constant(1, 1, s * s)); });
            }
            const auto cov = eigen(n["cov"]);
            return guarded(n, [&] { return Source::gaussian(cov); });
        }
        if (type == "stable") {
            check_keys(n, "stable source", {"type", "index", "scale"});
            const double index = number(n, "index", "stable source");
            const double scale = number_or(n, "scale", 1.0);
            return guarded(n, [&] { return Source::symmetric_stable(index, scale); });
        }
        if (type == "pareto") {
            check_keys(n, "pareto source", {"type", "exponent"});
            const double e = number(n, "exponent", "pareto source");
            return guarded(n, [&] { return Source::pareto_tail(e); });
        }
        if (type == "thinned") {
            check_keys(n, "thinned source", {"type", "keep", "of"});
            const double keep = number(n, "keep", "thinned source");
            const Source inner = source(require(n, "of", "thinned source"));
            return guarded(n, [&] { return Source::bernoulli_thinned(inner, keep); });
        }
        if (type == "scaled") {
            check_keys(n, "scaled source", {"type", "factor", "of"});
            const double f = number(n, "factor", "scaled source");
            const Source inner = source(require(n, "of", "scaled source"));
            return guarded(n, [&] { return Source::scaled(inner, f); });
        }
        if (type == "product") {
            check_keys(n, "product source", {"type", "parts"});
            const auto parts = sources(require(n, "parts", "product source"), "parts");
            return guarded(n, [&] { return Source::iid_product(parts); });
        }
        fail(n["type"], "unknown source type '" + type + "'");
    }

    /// A list of sources, or {iid: source, copies: n}.
    std::vector<Source> sources(const YAML::Node& n, const std::string& what) const {
        std::vector<Source> out;
        if (n.IsSequence()) {
            for (const auto& e : n) out.push_back(source(e));
        } else if (n.IsMap() && n["iid"].IsDefined()) {
            check_keys(n, what, {"iid", "copies"});
            const Source s = source(n["iid"]);
            const auto copies = count(require(n, "copies", what));
            out.assign(copies, s);
        } else {
            fail(n, what + " must be a list of sources or {iid, copies}");
        }
        if (out.empty()) fail(n, what + " is empty");
        const auto dim = out.front().dimension();
        for (const auto& s : out)
            if (s.dimension() != dim) fail(n, what + ": sources have different dimensions");
        return out;
    }

    // Norms -------------------------------------------------------------------

    Norm norm(const YAML::Node& n) const {
        expect_map(n, "norm");
        const std::string type = text(require(n, "type", "norm"));
        if (type == "lp") {
            check_keys(n, "lp norm", {"type", "dim", "p"});
            const auto dim = static_cast<std::size_t>(count(require(n, "dim", "lp norm")));
            const double p = number(n, "p", "lp norm");
            return guarded(n, [&] { return Norm::lp(dim, p); });
        }
        if (type == "weighted_lp") {
            check_keys(n, "weighted_lp norm", {"type", "p", "weights"});
            const double p = number(n, "p", "weighted_lp norm");
            const auto w = numbers(require(n, "weights", "weighted_lp norm"));
            return guarded(n, [&] { return Norm::weighted_lp(p, w); });
        }
        if (type == "ellipsoid") {
            check_keys(n, "ellipsoid norm", {"type", "matrix"});
            const auto m = eigen(require(n, "matrix", "ellipsoid norm"));
            return guarded(n, [&] { return Norm::ellipsoid(m); });
        }
        if (type == "polytope") {
            check_keys(n, "polytope norm", {"type", "directions"});
            const auto d = matrix(require(n, "directions", "polytope norm"));
            return guarded(n, [&] { return Norm::polytope_gauge(d); });
        }
        if (type == "scaled") {
            check_keys(n, "scaled norm", {"type", "factor", "of"});
            const double f = number(n, "factor", "scaled norm");
            const Norm inner = norm(require(n, "of", "scaled norm"));
            return guarded(n, [&] { return Norm::scaled(inner, f); });
        }
        fail(n["type"], "unknown norm type '" + type + "'");
    }

    /// {list: [...], random: {...}, scales: [...]}; scales wraps every member.
    std::vector<Norm> family(const YAML::Node& n, std::uint64_t random_seed, bool& used_random) const {
        check_keys(n, "norms", {"list", "random", "scales"});
        std::vector<Norm> out;
        if (n["list"].IsDefined()) {
            if (!n["list"].IsSequence()) fail(n["list"], "norms.list must be a list");
            for (const auto& e : n["list"]) out.push_back(norm(e));
        }
        if (n["random"].IsDefined()) {
            const YAML::Node r = n["random"];
            check_keys(r, "norms.random", {"dim", "size", "mix", "scale_min", "scale_max", "max_condition"});
            NormFamilyMix mix;
            if (r["mix"].IsDefined()) {
                const auto m = text(r["mix"]);
                if (m == "all") mix.kinds = NormFamilyMix::Kinds::all;
                else if (m == "lp_only") mix.kinds = NormFamilyMix::Kinds::lp_only;
                else if (m == "ellipsoid_only") mix.kinds = NormFamilyMix::Kinds::ellipsoid_only;
                else if (m == "polytope_only") mix.kinds = NormFamilyMix::Kinds::polytope_only;
                else fail(r["mix"], "unknown norm mix '" + m + "'");
            }
            mix.scale_min = number_or(r, "scale_min", 1.0);
            mix.scale_max = number_or(r, "scale_max", 1.0);
            mix.max_condition = number_or(r, "max_condition", mix.max_condition);
            const auto dim = static_cast<std::size_t>(count(require(r, "dim", "norms.random")));
            const auto size = static_cast<std::size_t>(count(require(r, "size", "norms.random")));
            auto members = guarded(r, [&] { return random_norm_family(random_seed, dim, size, mix); });
            out.insert(out.end(), members.begin(), members.end());
            used_random = true;
        }
        if (n["scales"].IsDefined()) {
            const auto scales = numbers(n["scales"]);
            std::vector<Norm> scaled;
            for (const auto& base : out)
                for (double c : scales) scaled.push_back(guarded(n["scales"], [&] { return Norm::scaled(base, c); }));
            out = std::move(scaled);
        }
        if (out.empty()) fail(n, "the norm family is empty");
        const auto dim = out.front().dimension();
        for (const auto& m : out)
            if (m.dimension() != dim) fail(n, "norms have different dimensions");
        return out;
    }

    Estimator estimator(const YAML::Node& n) const {
        check_keys(n, "estimator", {"mode", "samples", "confidence", "enumeration_cap"});
        Estimator e;
        if (n["mode"].IsDefined()) {
            const auto m = text(n["mode"]);
            if (m == "auto") e.mode = Estimator::Mode::automatic;
            else if (m == "exact") e.mode = Estimator::Mode::exact;
            else if (m == "mc") e.mode = Estimator::Mode::monte_carlo;
            else fail(n["mode"], "unknown estimator mode '" + m + "' (auto, exact, mc)");
        }
        e.samples = count_or(n, "samples", e.samples);
        e.confidence = number_or(n, "confidence", e.confidence);
        e.enumeration_cap = count_or(n, "enumeration_cap", e.enumeration_cap);
        guarded(n, [&] {
            e.validate();
            return 0;
        });
        return e;
    }

private:
    std::string origin_;
};

std::set<std::string> keys_for(ExperimentKind kind) {
    std::set<std::string> k{"kind", "seed", "estimator", "csv"};
    auto add = [&](Keys more) {
        for (auto s : more) k.emplace(s);
    };
    switch (kind) {
        case ExperimentKind::tail: add({"norms", "law", "thresholds"}); break;
        case ExperimentKind::domination: add({"norms", "x", "y", "kappa", "lambda"}); break;
        case ExperimentKind::tensorize:
            add({"norms", "pairs", "gaussian_pairs", "kappa", "lambda", "alpha", "route"});
            break;
        case ExperimentKind::wb: add({"norms", "law", "C", "delta", "theta", "lambdas", "escalation_cap"}); break;
        case ExperimentKind::wb_sum:
            add({"norms", "components", "C", "delta", "theta", "lambdas", "escalation_cap"});
            break;
        case ExperimentKind::majorize: add({"norms", "a", "b", "domination"}); break;
        case ExperimentKind::schur: add({"norms", "a", "b", "source", "transform"}); break;
        case ExperimentKind::counterexample:
            add({"delta", "n_grid", "kappa", "lambda", "expected_violation"});
            break;
        case ExperimentKind::inequality_suite:
            add({"sign_instances", "max_n", "max_dim", "thetas", "sum_laws", "max_components", "levels",
                 "sandwich_laws", "alphas", "removedelta_instances", "ps"});
            break;
        case ExperimentKind::recursion: add({"p0", "C", "delta", "theta", "K"}); break;
    }
    return k;
}

bool needs_norms(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::counterexample:
        case ExperimentKind::inequality_suite:
        case ExperimentKind::recursion:
        case ExperimentKind::majorize: return false;
        default: return true;
    }
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, const std::string& origin) {
    const Parser P(origin);
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw ConfigError(origin, e.mark.line + 1, e.msg);
    }
    if (!root.IsMap()) throw ConfigError(origin, 1, "config must be a mapping");

    ExperimentConfig c;
    c.origin = origin;
    c.text = std::string(text);
    const std::string kind_name = P.text(P.require(root, "kind", "config"));
    const auto kind = parse_kind(kind_name);
    if (!kind) P.fail(root["kind"], "unknown experiment kind '" + kind_name + "'");
    c.kind = *kind;
    P.check_keys(root, std::string("a ") + kind_name + " config", keys_for(c.kind));
    c.seed = P.count(P.require(root, "seed", "config"));
    if (root["estimator"].IsDefined()) c.estimator = P.estimator(root["estimator"]);
    c.csv = P.flag_or(root, "csv", true);

    const bool wants_norms = needs_norms(c.kind) ||
                             (c.kind == ExperimentKind::majorize && root["domination"].IsDefined());
    if (wants_norms) {
        bool used_random = false;
        const std::uint64_t family_seed = StreamKey{c.seed}.child("run.norm_family").stream;
        c.norms = P.family(P.require(root, "norms", "config"), family_seed, used_random);
        if (used_random) c.norm_family_seed = family_seed;
    } else if (root["norms"].IsDefined()) {
        P.fail(root["norms"], "a " + kind_name + " config takes no norm family");
    }
    auto check_dim = [&](const YAML::Node& at, std::size_t dim) {
        if (!c.norms.empty() && c.norms.front().dimension() != dim)
            P.fail(at, "source dimension " + std::to_string(dim) + " does not match the norm dimension " +
                           std::to_string(c.norms.front().dimension()));
    };
    auto read_wb = [&](const YAML::Node& n) {
        WBParams p{P.number(n, "C", "config"), P.number(n, "delta", "config"), P.number(n, "theta", "config")};
        P.guarded(n, [&] {
            p.validate();
            return 0;
        });
        return p;
    };
    auto read_lambdas = [&] {
        if (!root["lambdas"].IsDefined()) return;
        c.lambdas = P.numbers(root["lambdas"]);
        if (c.lambdas.empty()) P.fail(root["lambdas"], "lambdas is empty");
        for (double l : c.lambdas)
            if (!(l >= 1.0) || !std::isfinite(l)) P.fail(root["lambdas"], "every lambda must be >= 1");
    };
    auto read_kl = [&] {
        c.kappa = P.number_or(root, "kappa", 1.0);
        c.lambda = P.number_or(root, "lambda", 1.0);
        if (!(c.kappa >= 1.0) || !std::isfinite(c.kappa)) P.fail(root["kappa"], "kappa must be >= 1");
        if (!(c.lambda >= 1.0) || !std::isfinite(c.lambda)) P.fail(root["lambda"], "lambda must be >= 1");
    };
    auto read_weights = [&] {
        c.a = P.numbers(P.require(root, "a", "config"));
        c.b = P.numbers(P.require(root, "b", "config"));
        if (c.a.size() != c.b.size() || c.a.empty()) P.fail(root["b"], "a and b must be nonempty and equally long");
        if (const auto k = majorisation_violation(c.a, c.b))
            P.fail(root["a"], "a is not majorised by b (partial sum " + std::to_string(*k + 1) + ")");
    };

    switch (c.kind) {
        case ExperimentKind::tail: {
            c.law = P.sources(P.require(root, "law", "config"), "law");
            check_dim(root["law"], c.law.front().dimension());
            c.thresholds = P.numbers(P.require(root, "thresholds", "config"));
            if (c.thresholds.empty()) P.fail(root["thresholds"], "thresholds is empty");
            break;
        }
        case ExperimentKind::domination: {
            c.x = P.sources(P.require(root, "x", "config"), "x");
            c.y = P.sources(P.require(root, "y", "config"), "y");
            check_dim(root["x"], c.x.front().dimension());
            check_dim(root["y"], c.y.front().dimension());
            read_kl();
            break;
        }
        case ExperimentKind::tensorize: {
            read_kl();
            c.alpha = P.number_or(root, "alpha", 1.0);
            if (!(c.alpha > 0.0 && c.alpha <= 1.0)) P.fail(root["alpha"], "alpha must lie in (0,1]");
            if (root["route"].IsDefined()) {
                const auto r = P.text(root["route"]);
                if (r == "direct") c.route = TensorizeRoute::direct;
                else if (r == "split") c.route = TensorizeRoute::split;
                else if (r == "thin") c.route = TensorizeRoute::thin;
                else P.fail(root["route"], "unknown route '" + r + "' (direct, split, thin)");
            }
            const bool listed = root["pairs"].IsDefined();
            const bool generated = root["gaussian_pairs"].IsDefined();
            if (listed == generated) P.fail(root, "tensorize needs exactly one of 'pairs' or 'gaussian_pairs'");
            if (listed) {
                const YAML::Node ps = root["pairs"];
                if (!ps.IsSequence() || ps.size() == 0) P.fail(ps, "pairs must be a nonempty list");
                for (const auto& p : ps) {
                    P.check_keys(p, "pair", {"x", "y"});
                    c.pairs.emplace_back(P.source(P.require(p, "x", "pair")), P.source(P.require(p, "y", "pair")));
                    check_dim(p, c.pairs.back().first.dimension());
                    check_dim(p, c.pairs.back().second.dimension());
                }
            } else {
                const YAML::Node g = root["gaussian_pairs"];
                P.check_keys(g, "gaussian_pairs", {"count", "dim"});
                const auto count = P.count(P.require(g, "count", "gaussian_pairs"));
                const auto dim = static_cast<std::size_t>(P.count(P.require(g, "dim", "gaussian_pairs")));
                if (count == 0) P.fail(g, "gaussian_pairs.count must be >= 1");
                P.guarded(g, [&] {
                    check_dimension(dim, "gaussian_pairs");
                    return 0;
                });
                check_dim(g, dim);
                RandomStream rs(StreamKey{c.seed}.child("run.gaussian_pairs"), 0);
                c.pairs = fixtures::gaussian_pairs(rs, count, dim);
            }
            break;
        }
        case ExperimentKind::wb:
        case ExperimentKind::wb_sum: {
            const char* key = c.kind == ExperimentKind::wb ? "law" : "components";
            c.law = P.sources(P.require(root, key, "config"), key);
            check_dim(root[key], c.law.front().dimension());
            c.wb = read_wb(root);
            read_lambdas();
            c.escalation_cap = P.count_or(root, "escalation_cap", 0);
            if (c.escalation_cap > kMaxEscalatedSamples)
                P.fail(root["escalation_cap"], "escalation_cap exceeds 1e8 samples");
            break;
        }
        case ExperimentKind::majorize: {
            read_weights();
            if (root["domination"].IsDefined()) {
                const YAML::Node d = root["domination"];
                P.check_keys(d, "domination", {"source", "C", "delta", "theta", "exploratory"});
                WeightedDominationSpec spec{P.source(P.require(d, "source", "domination")), read_wb(d),
                                            P.flag_or(d, "exploratory", false)};
                check_dim(d["source"], spec.source.dimension());
                if (spec.params.delta < 1.0)
                    P.fail(d["delta"], "weighted domination needs delta > 1; use a counterexample config for delta < 1");
                if (spec.params.delta == 1.0 && !spec.exploratory)
                    P.fail(d["delta"], "delta = 1 is only accepted with exploratory: true");
                c.weighted = std::move(spec);
            }
            break;
        }
        case ExperimentKind::schur: {
            read_weights();
            c.source = P.source(P.require(root, "source", "config"));
            check_dim(root["source"], c.source->dimension());
            if (root["transform"].IsDefined()) {
                const YAML::Node t = root["transform"];
                P.check_keys(t, "transform", {"type", "shift"});
                const auto type = P.text(P.require(t, "type", "transform"));
                if (type == "identity") c.transform = SignTransform::identity();
                else if (type == "square") c.transform = SignTransform::square();
                else if (type == "shifted_plus") c.transform = SignTransform::shifted_plus(P.number_or(t, "shift", 1.0));
                else P.fail(t["type"], "unknown transform '" + type + "' (identity, shifted_plus, square)");
            }
            break;
        }
        case ExperimentKind::counterexample: {
            c.delta = P.number(root, "delta", "config");
            if (!(c.delta > 0.0 && c.delta < 1.0)) P.fail(root["delta"], "delta must lie in (0,1)");
            const YAML::Node g = P.require(root, "n_grid", "config");
            if (!g.IsSequence() || g.size() == 0) P.fail(g, "n_grid must be a nonempty list");
            for (const auto& e : g) {
                const auto n = P.count(e);
                if (n == 0) P.fail(e, "n must be >= 1");
                c.n_grid.push_back(n);
            }
            read_kl();
            c.expected_violation = P.flag_or(root, "expected_violation", true);
            break;
        }
        case ExperimentKind::inequality_suite: {
            auto& s = c.suite;
            s.sign_instances = P.count_or(root, "sign_instances", s.sign_instances);
            s.max_n = P.count_or(root, "max_n", s.max_n);
            s.max_dim = P.count_or(root, "max_dim", s.max_dim);
            s.sum_laws = P.count_or(root, "sum_laws", s.sum_laws);
            s.max_components = P.count_or(root, "max_components", s.max_components);
            s.sandwich_laws = P.count_or(root, "sandwich_laws", s.sandwich_laws);
            s.removedelta_instances = P.count_or(root, "removedelta_instances", s.removedelta_instances);
            if (root["thetas"].IsDefined()) s.thetas = P.numbers(root["thetas"]);
            if (root["levels"].IsDefined()) s.levels = P.numbers(root["levels"]);
            if (root["alphas"].IsDefined()) s.alphas = P.numbers(root["alphas"]);
            if (root["ps"].IsDefined()) s.ps = P.numbers(root["ps"]);
            if (s.max_n == 0 || s.max_n > kSignEnumerationCap)
                P.fail(root["max_n"], "max_n must lie in [1, 22]");
            if (s.max_dim == 0 || s.max_dim > kMaxDimension) P.fail(root["max_dim"], "max_dim must lie in [1, 16]");
            if (s.max_components == 0 || s.max_components > 6)
                P.fail(root["max_components"], "max_components must lie in [1, 6]");
            for (double t : s.thetas)
                if (!(t > 0.0 && t < 1.0)) P.fail(root["thetas"], "every theta must lie in (0,1)");
            for (double l : s.levels)
                if (!(l > 0.0)) P.fail(root["levels"], "every level must be positive");
            for (double a : s.alphas)
                if (!(a > 0.0 && a <= 1.0)) P.fail(root["alphas"], "every alpha must lie in (0,1]");
            for (double p : s.ps)
                if (!(p > 0.0 && p <= 1.0)) P.fail(root["ps"], "every p must lie in (0,1]");
            break;
        }
        case ExperimentKind::recursion: {
            c.p0 = P.number(root, "p0", "config");
            if (!(c.p0 > 0.0 && c.p0 < 1.0)) P.fail(root["p0"], "p0 must lie in (0,1)");
            c.wb = read_wb(root);
            const auto K = P.count(P.require(root, "K", "config"));
            if (K > 200) P.fail(root["K"], "K must be <= 200");
            c.K = static_cast<int>(K);
            break;
        }
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

}  // namespace symdom
