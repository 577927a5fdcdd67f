// symdom: run, validate and list stochastic-domination experiments.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "symdom/config.hpp"
#include "symdom/parallel.hpp"
#include "symdom/runner.hpp"

namespace fs = std::filesystem;

namespace {

int run_config(const std::string& path, const fs::path& out_dir) {
    const auto config = symdom::load_config(path);
    const auto start = std::chrono::steady_clock::now();
    const auto result = symdom::execute(config);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    symdom::write_outputs(config, result, out_dir, wall);
    const auto& t = result.tally;
    std::cout << symdom::to_string(config.kind) << ": " << t.holds << " holds, " << t.inconclusive
              << " inconclusive, " << t.violated << " violated";
    if (config.kind == symdom::ExperimentKind::counterexample)
        std::cout << " (expected-violation: " << (config.expected_violation ? "true" : "false") << ")";
    std::cout << "\nreport: " << (out_dir / "report.json").string() << "\n";
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic domination and weak concentration experiments"};
    app.set_version_flag("--version", symdom::version());
    app.require_subcommand(1);

    unsigned threads = 1;
    std::string out_dir = "symdom-out";
    app.add_option("--threads", threads, "Worker threads (results do not depend on it)")
        ->check(CLI::Range(1u, 1024u));
    app.add_option("--out", out_dir, "Output directory for report, data and manifest");

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run an experiment config");
    run->add_option("config", config_path, "YAML config file")->required();

    auto* validate = app.add_subcommand("validate", "Parse and validate a config without running it");
    validate->add_option("config", config_path, "YAML config file")->required();

    bool show_yaml = false;
    std::string write_dir;
    auto* list = app.add_subcommand("list-experiments", "List the built-in experiment catalog");
    list->add_flag("--yaml", show_yaml, "Print each default config");
    list->add_option("--write", write_dir, "Write each default config to DIR/<name>.yaml");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        symdom::parallel::set_threads(threads);
        if (*run) return run_config(config_path, out_dir);
        if (*validate) {
            const auto c = symdom::load_config(config_path);
            std::cout << config_path << ": ok (" << symdom::to_string(c.kind) << ", seed " << c.seed << ")\n";
            return 0;
        }
        if (*list) {
            if (!write_dir.empty()) fs::create_directories(write_dir);
            for (const auto& e : symdom::catalog()) {
                std::cout << e.name << "\t" << symdom::to_string(e.kind) << "\t" << e.anchor << "\n    "
                          << e.description << "\n";
                if (show_yaml) std::cout << e.yaml << "\n";
                if (!write_dir.empty()) std::ofstream(fs::path(write_dir) / (e.name + ".yaml")) << e.yaml;
            }
            return 0;
        }
    } catch (const symdom::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const symdom::ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const symdom::PreconditionError& e) {
        std::cerr << "precondition failed: " << e.what() << "\n";
        return 1;
    } catch (const symdom::CapacityError& e) {
        std::cerr << "capacity exceeded: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
