#pragma once

// Executes experiment configs. The JSON report holds only values that are a
// function of the config and the library version; wall-clock data goes to
// the manifest.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "symdom/config.hpp"
#include "symdom/stats.hpp"

namespace symdom {

std::string version();

struct SeedRecord {
    std::string operation;
    std::uint64_t stream = 0;
};

struct VerdictTally {
    std::size_t holds = 0;
    std::size_t inconclusive = 0;
    std::size_t violated = 0;

    void add(Verdict v) noexcept;
    std::size_t total() const noexcept { return holds + inconclusive + violated; }
};

struct RunResult {
    nlohmann::json report;
    /// (file name, contents) for CSV and JSON-lines data files.
    std::vector<std::pair<std::string, std::string>> data_files;
    std::vector<SeedRecord> seeds;
    VerdictTally tally;
    int exit_code = 0;
};

/// Exit status: 2 if any verdict is violated; otherwise 3 if the experiment
/// produces verdicts and none of them holds; otherwise 0.
int exit_code_for(ExperimentKind kind, const VerdictTally& tally) noexcept;

RunResult execute(const ExperimentConfig& config);

/// Writes report.json, the data files and manifest.json into dir.
void write_outputs(const ExperimentConfig& config, const RunResult& result, const std::filesystem::path& dir,
                   double wall_seconds);

/// 64-bit FNV-1a of the config text, as 16 hex digits.
std::string config_digest(const std::string& text);

struct CatalogEntry {
    std::string name;
    ExperimentKind kind;
    std::string anchor;
    std::string description;
    std::string yaml;
};

const std::vector<CatalogEntry>& catalog();

}  // namespace symdom
