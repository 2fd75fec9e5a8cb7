#pragma once

#include "parapde/harness.hpp"

#include <functional>
#include <string>
#include <vector>

namespace parapde {

struct ExperimentInfo {
    std::string name;
    std::string subcommand;  // CLI subcommand the experiment belongs to
    std::string summary;
    std::function<void(const ExperimentConfig&, ExperimentReport&)> run;
};

const std::vector<ExperimentInfo>& experiment_registry();
const ExperimentInfo* find_experiment(const std::string& name);

// Dispatches to the named experiment; rows are canonicalized and metadata filled in.
// Unknown experiment names raise ConfigurationError.
ExperimentReport run_experiment(const ExperimentConfig& config);

// Rows of the deterministic constants table, as committed under tests/fixtures.
std::string fixture_json(const ExperimentReport& r);
// Rows of `fresh` that differ from the fixture beyond rel_tol, formatted as a table; empty when equal.
std::string fixture_diff(const std::string& fixture, const ExperimentReport& fresh, double rel_tol);

}  // namespace parapde
