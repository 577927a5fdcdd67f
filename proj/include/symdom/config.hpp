#pragma once

// Experiment configuration files (YAML). Every map is checked against the
// keys its experiment kind understands; unknown keys, missing seeds and
// out-of-domain constants are rejected with a line-anchored ConfigError.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symdom/distributions.hpp"
#include "symdom/dominance.hpp"
#include "symdom/estimation.hpp"
#include "symdom/geometry.hpp"
#include "symdom/inequalities.hpp"
#include "symdom/weakborell.hpp"

namespace symdom {

class ConfigError : public ParameterError {
public:
    /// line is 1-based; 0 when the location is unknown.
    ConfigError(const std::string& origin, int line, const std::string& message);
    int line() const noexcept { return line_; }

private:
    int line_;
};

enum class ExperimentKind {
    tail,
    domination,
    tensorize,
    wb,
    wb_sum,
    majorize,
    schur,
    counterexample,
    inequality_suite,
    recursion
};

std::string_view to_string(ExperimentKind kind) noexcept;
std::optional<ExperimentKind> parse_kind(std::string_view name) noexcept;
const std::vector<ExperimentKind>& all_kinds();

enum class TensorizeRoute { direct, split, thin };

struct SuiteSpec {
    std::size_t sign_instances = 200;
    std::size_t max_n = 12;
    std::size_t max_dim = 3;
    std::vector<double> thetas{0.1, 0.5, 0.9};
    std::size_t sum_laws = 100;
    std::size_t max_components = 4;
    std::vector<double> levels{0.25, 0.5, 1.0, 1.5, 2.0};
    std::size_t sandwich_laws = 50;
    std::vector<double> alphas{0.25, 0.5, 1.0};
    std::size_t removedelta_instances = 50;
    std::vector<double> ps{0.2, 0.5, 0.9};
};

struct WeightedDominationSpec {
    Source source;
    WBParams params;
    bool exploratory = false;
};

struct ExperimentConfig {
    std::string origin;  // file name or "<string>" for messages
    std::string text;    // raw config, hashed into the manifest
    ExperimentKind kind = ExperimentKind::tail;
    std::uint64_t seed = 0;
    Estimator estimator{};
    bool csv = true;

    std::vector<Norm> norms;
    std::uint64_t norm_family_seed = 0;  // 0 when the family has no random members

    std::vector<Source> law;  // tail, wb, wb-sum components
    std::vector<Source> x;
    std::vector<Source> y;
    std::vector<SourcePair> pairs;
    double kappa = 1.0;
    double lambda = 1.0;
    double alpha = 1.0;
    TensorizeRoute route = TensorizeRoute::direct;

    std::vector<double> thresholds;
    WBParams wb{};
    std::vector<double> lambdas = default_lambda_grid();
    std::uint64_t escalation_cap = 0;

    std::vector<double> a;
    std::vector<double> b;
    std::optional<WeightedDominationSpec> weighted;
    std::optional<Source> source;
    SignTransform transform = SignTransform::shifted_plus(1.0);

    double delta = 0.5;
    std::vector<std::uint64_t> n_grid;
    bool expected_violation = false;

    double p0 = 1e-3;
    int K = 10;

    SuiteSpec suite{};
};

ExperimentConfig parse_config(std::string_view text, const std::string& origin = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace symdom
