#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sgreg/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Regularized solver and theorem-verification harness for ill-posed "
                 "Cauchy problems of coupled elliptic sine-Gordon type"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string study_kind;

    CLI::App* verify = app.add_subcommand("verify", "Run invariant checks and the filter sweep");
    verify->add_option("--config", config_path, "Run configuration file")->required();

    CLI::App* solve = app.add_subcommand("solve", "Solve one sample and write the trajectory");
    solve->add_option("--config", config_path, "Run configuration file")->required();
    solve->add_option("--out", out_dir, "Output directory (overrides the config)");
    solve->add_option("--seed", seed, "Noise seed (overrides the plan)")
        ->each([&](const std::string&) { seed_set = true; });

    CLI::App* study = app.add_subcommand("study", "Run a sweep study and write its report");
    study->add_option("kind", study_kind, "convergence | stability | loglaw | blowup")
        ->required();
    study->add_option("--config", config_path, "Run configuration file")->required();
    study->add_option("--out", out_dir, "Output directory (overrides the config)");
    study->add_option("--seed", seed, "Noise seed (overrides the first plan seed)")
        ->each([&](const std::string&) { seed_set = true; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 2;
    }

    const std::optional<std::filesystem::path> out =
        out_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(out_dir);
    const std::optional<std::uint64_t> seed_override =
        seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt;

    if (verify->parsed()) {
        return sgreg::cmd_verify(config_path);
    }
    if (solve->parsed()) {
        return sgreg::cmd_solve(config_path, out, seed_override);
    }
    const std::optional<sgreg::StudyKind> kind = sgreg::parse_study_kind(study_kind);
    if (!kind) {
        std::cerr << "error: unknown study kind '" << study_kind
                  << "' (expected convergence, stability, loglaw or blowup)\n";
        return 2;
    }
    return sgreg::cmd_study(*kind, config_path, out, seed_override);
}
