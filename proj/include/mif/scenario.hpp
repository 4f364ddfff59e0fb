#pragma once

#include "mif/io.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mif {

struct SequenceConfig {
    std::string kind = "lattice";        // lattice | perturbed | decaying | file
    std::string pattern = "alternating"; // perturbed: alternating | random
    double delta = 0.0;
    double rate = 2.0;
    double nu = 1.0 / kPi;
    std::string file;
};

struct ScenarioConfig {
    std::string scenario;
    std::filesystem::path out = "out";
    std::uint64_t seed = 20240917;
    int grid = 0;  // circle resolution, 0 = scenario default
    std::optional<std::pair<int, int>> window;
    SequenceConfig sequence;
    InnerFunctionSpec theta = exponential_inner(2.0 * kPi);
    std::string tail = "lattice";  // lattice | truncate
    int clark_terms = 10000;
    std::vector<int> sizes;
    std::vector<double> deltas;
    double tau = 0.1;
    double tau_inv = kTauInvertible;
    double aob_threshold = 0.02;
};

json to_json(const ScenarioConfig& c);
/// Unknown keys are rejected with ConfigError.
ScenarioConfig config_from_json(const json& j);

/// "a..b" to a window; throws ConfigError.
std::pair<int, int> parse_window(const std::string& text);
TailPolicy parse_tail(const std::string& text);

/// Builds the configured sequence on [lo, hi] (file sequences carry their own indices).
SeparatedSequence build_sequence(const SequenceConfig& c, int lo, int hi, std::uint64_t seed);

struct Check {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool passed = false;
    std::string relation;  // how value compares with threshold
};

struct ScenarioResult {
    std::string scenario;
    std::vector<Check> checks;
    json report;
    std::vector<std::string> files;

    bool passed() const;
};

struct ScenarioInfo {
    std::string name;
    std::string description;
    json defaults;
};

std::vector<ScenarioInfo> list_scenarios(const std::string& filter = "");
ScenarioConfig default_config(const std::string& name);

/// Runs the scenario, writes its files under config.out and report.json with the
/// resolved configuration.
ScenarioResult run_scenario(const ScenarioConfig& config);

}  // namespace mif
