#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace sgreg {

enum class StudyKind { Convergence, Stability, Loglaw, Blowup };

/// Parses a study kind name; empty for unknown names.
std::optional<StudyKind> parse_study_kind(const std::string& name);

// Command entry points shared by the CLI and the in-process tests.
// Exit codes: 0 pass, 2 config error, 3 solver non-convergence,
// 4 study/verify verdict failure.

/// Runs the filter-bound sweep plus the basis/kernel/model invariant suites
/// and prints a one-line verdict table.
int cmd_verify(const std::filesystem::path& config_path);

/// Solves a single sample and writes trajectory.csv + diagnostics.json.
/// Artifacts are written even when the solve does not converge.
int cmd_solve(const std::filesystem::path& config_path,
              const std::optional<std::filesystem::path>& out_dir,
              std::optional<std::uint64_t> seed_override);

/// Dispatches one study and writes <kind>.csv + <kind>.json.
int cmd_study(StudyKind kind, const std::filesystem::path& config_path,
              const std::optional<std::filesystem::path>& out_dir,
              std::optional<std::uint64_t> seed_override);

}  // namespace sgreg
