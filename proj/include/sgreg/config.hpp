#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "sgreg/problem.hpp"
#include "sgreg/solver.hpp"
#include "sgreg/study.hpp"

namespace sgreg {

/// A complete run description loaded from the line-oriented key-value config
/// format (sections [problem], [discretization], [regularization], [plan],
/// [data], [output]; see the shipped default config for the canonical key
/// set). Unknown sections and keys are rejected.
struct RunConfig {
    ProblemSpec problem;    ///< constants only; forcing is filled by the recipe
    std::string recipe = "two_mode_decay";
    Discretization disc;
    RegularizationConfig reg;
    bool beta_overridden = false;  ///< beta key present instead of epsilon^m
    bool noise = true;             ///< solve command: perturb the data first
    SweepPlan plan;
    /// Optional explicit Cauchy coefficients replacing the recipe's data.
    std::optional<CauchyData> data;
    std::string output_dir = "out";

    bool operator==(const RunConfig&) const = default;

    /// Re-validates every module-level invariant; throws ConfigError naming
    /// the offending field (including the filter hypothesis a^k > k*beta).
    void validate() const;
};

/// Parses config text; `origin` names the source in diagnostics.
/// Throws ConfigError with line/field information on malformed input.
RunConfig parse_run_config(const std::string& text, const std::string& origin);

/// Loads and validates a config file. Missing file throws ConfigError.
RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical text form; parse_run_config(serialize_run_config(c)) == c.
std::string serialize_run_config(const RunConfig& config);

/// Serializes and writes atomically.
void save_run_config(const RunConfig& config, const std::filesystem::path& path);

}  // namespace sgreg
