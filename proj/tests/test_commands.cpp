#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sgreg/commands.hpp"
#include "sgreg/config.hpp"
#include "sgreg/io.hpp"

using namespace sgreg;

namespace {

std::filesystem::path make_workdir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "sgreg_cmd_test" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string small_config(const std::string& recipe, const std::string& extra) {
    std::ostringstream out;
    out << "[problem]\n"
        << "a = 1\nb = 3.141592653589793\nalpha1 = 1\nalpha2 = 1\n"
        << "gamma1 = 1\ngamma2 = 1\ndelta = 1 0.5 -0.5 1\nsigma = 0 0 0 0\n"
        << "recipe = " << recipe << "\n"
        << "[discretization]\n"
        << "n_modes = 12\nn_quad = 48\nn_x = 41\npicard_tol = 1e-10\npicard_max_iters = 200\n"
        << "[regularization]\nepsilon = 0.01\nm = 1\nk = 1\n"
        << "[plan]\nepsilons = 0.01 0.001 0.0001\nm = 1\nk = 1\nseeds = 1 2\n"
        << "probe_x = 0 0.5\n"
        << "[output]\ndir = out\n"
        << extra;
    return out.str();
}

std::filesystem::path write_config(const std::filesystem::path& dir, const std::string& text) {
    const auto path = dir / "run.conf";
    write_text_atomic(path, text);
    return path;
}

}  // namespace

TEST_CASE("cmd_solve writes the trajectory and diagnostics") {
    const auto dir = make_workdir("solve");
    std::string text = small_config("decaying_mode", "");
    text += "[problem]\ngamma1 = 0\ngamma2 = 0\ndelta = 0 0 0 0\n";
    text += "[regularization]\nnoise = false\n";
    const auto config_path = write_config(dir, text);

    const int code = cmd_solve(config_path, dir / "artifacts", std::nullopt);
    CHECK(code == 0);

    std::ifstream csv(dir / "artifacts" / "trajectory.csv");
    REQUIRE(csv.is_open());
    std::string header;
    std::getline(csv, header);
    CHECK(header == "x,mode,u_coeff,v_coeff");

    // the decaying-mode run propagates the first coefficient as e^{-x}
    const double c0 = std::sqrt(3.141592653589793 / 2.0);
    std::string line;
    size_t rows = 0;
    while (std::getline(csv, line)) {
        if (line.empty()) {
            continue;
        }
        ++rows;
        std::istringstream in(line);
        std::string x_str, mode_str, u_str, v_str;
        std::getline(in, x_str, ',');
        std::getline(in, mode_str, ',');
        std::getline(in, u_str, ',');
        std::getline(in, v_str, ',');
        if (mode_str == "1") {
            const double x = std::stod(x_str);
            const double expected = c0 * std::exp(-x);
            CHECK(std::abs(std::stod(u_str) - expected) <= 1e-10);
        } else {
            CHECK(std::abs(std::stod(u_str)) <= 1e-12);
        }
        CHECK(std::abs(std::stod(v_str)) <= 1e-12);
    }
    CHECK(rows == 41 * 12);

    std::ifstream diag_in(dir / "artifacts" / "diagnostics.json");
    const nlohmann::json diag = nlohmann::json::parse(diag_in);
    CHECK(diag["converged"] == true);
    CHECK(diag["noise"] == false);

    std::filesystem::remove_all(dir);
}

TEST_CASE("cmd_solve honors an explicit data block") {
    const auto dir = make_workdir("solve_data");
    // zero recipe for zero forcing, then hand the decaying-mode data in
    // explicitly: the first coefficient must still propagate as e^{-x}
    std::string text = small_config("zero", "");
    text += "[problem]\ngamma1 = 0\ngamma2 = 0\ndelta = 0 0 0 0\n";
    text += "[regularization]\nnoise = false\n";
    const double c0 = std::sqrt(3.141592653589793 / 2.0);
    std::ostringstream data;
    data.precision(17);
    data << "[data]\n";
    data << "u0 = " << c0;
    for (int n = 1; n < 12; ++n) data << " 0";
    data << "\nu1 = " << -c0;
    for (int n = 1; n < 12; ++n) data << " 0";
    data << "\nv0 =";
    for (int n = 0; n < 12; ++n) data << " 0";
    data << "\nv1 =";
    for (int n = 0; n < 12; ++n) data << " 0";
    data << "\n";
    text += data.str();
    const auto config_path = write_config(dir, text);

    CHECK(cmd_solve(config_path, dir / "artifacts", std::nullopt) == 0);
    std::ifstream csv(dir / "artifacts" / "trajectory.csv");
    std::string line;
    std::getline(csv, line);  // header
    while (std::getline(csv, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream in(line);
        std::string x_str, mode_str, u_str, v_str;
        std::getline(in, x_str, ',');
        std::getline(in, mode_str, ',');
        std::getline(in, u_str, ',');
        std::getline(in, v_str, ',');
        if (mode_str == "1") {
            const double expected = c0 * std::exp(-std::stod(x_str));
            CHECK(std::abs(std::stod(u_str) - expected) <= 1e-10);
        }
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("cmd_solve reports all-zero output for the zero problem") {
    const auto dir = make_workdir("solve_zero");
    std::string text = small_config("zero", "[regularization]\nnoise = false\n");
    const auto config_path = write_config(dir, text);
    CHECK(cmd_solve(config_path, dir / "artifacts", std::nullopt) == 0);

    std::ifstream csv(dir / "artifacts" / "trajectory.csv");
    std::string line;
    std::getline(csv, line);  // header
    while (std::getline(csv, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream in(line);
        std::string x_str, mode_str, u_str, v_str;
        std::getline(in, x_str, ',');
        std::getline(in, mode_str, ',');
        std::getline(in, u_str, ',');
        std::getline(in, v_str, ',');
        CHECK(std::stod(u_str) == 0.0);
        CHECK(std::stod(v_str) == 0.0);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("cmd_solve exits 3 on non-convergence but still writes artifacts") {
    const auto dir = make_workdir("solve_diverge");
    std::string text = small_config("two_mode_decay", "");
    text += "[problem]\ngamma1 = 160\ngamma2 = 160\n";
    text += "[discretization]\npicard_max_iters = 10\n";
    const auto config_path = write_config(dir, text);

    CHECK(cmd_solve(config_path, dir / "artifacts", std::nullopt) == 3);
    CHECK(std::filesystem::exists(dir / "artifacts" / "trajectory.csv"));
    std::ifstream diag_in(dir / "artifacts" / "diagnostics.json");
    const nlohmann::json diag = nlohmann::json::parse(diag_in);
    CHECK(diag["converged"] == false);
    std::filesystem::remove_all(dir);
}

TEST_CASE("command exit codes for config errors") {
    const auto dir = make_workdir("config_errors");

    SUBCASE("missing file") {
        CHECK(cmd_solve(dir / "missing.conf", std::nullopt, std::nullopt) == 2);
        CHECK(cmd_verify(dir / "missing.conf") == 2);
        CHECK(cmd_study(StudyKind::Convergence, dir / "missing.conf", std::nullopt,
                        std::nullopt) == 2);
    }

    SUBCASE("malformed key") {
        const auto path = write_config(dir, small_config("two_mode_decay", "[problem]\nbogus = 1\n"));
        CHECK(cmd_solve(path, std::nullopt, std::nullopt) == 2);
    }

    SUBCASE("violated filter hypothesis") {
        const auto path =
            write_config(dir, small_config("two_mode_decay", "[regularization]\nbeta = 2\n"));
        CHECK(cmd_verify(path) == 2);
    }

    SUBCASE("single noise level for the log-law study") {
        const auto path =
            write_config(dir, small_config("two_mode_decay", "[plan]\nepsilons = 0.01\n"));
        CHECK(cmd_study(StudyKind::Loglaw, path, dir / "out", std::nullopt) == 2);
    }

    std::filesystem::remove_all(dir);
}

TEST_CASE("cmd_study runs the sweep studies and writes artifacts") {
    const auto dir = make_workdir("study");
    const auto path = write_config(dir, small_config("two_mode_decay", ""));

    SUBCASE("convergence") {
        CHECK(cmd_study(StudyKind::Convergence, path, dir / "out", std::nullopt) == 0);
        CHECK(std::filesystem::exists(dir / "out" / "convergence.csv"));
        CHECK(std::filesystem::exists(dir / "out" / "convergence.json"));
    }

    SUBCASE("stability with identical seeds gives zero distances") {
        const auto same_seeds =
            write_config(dir, small_config("two_mode_decay", "[plan]\nseeds = 7 7\n"));
        CHECK(cmd_study(StudyKind::Stability, same_seeds, dir / "out", std::nullopt) == 0);
        std::ifstream csv(dir / "out" / "stability.csv");
        std::string line;
        std::getline(csv, line);  // header
        while (std::getline(csv, line)) {
            if (line.empty()) {
                continue;
            }
            std::istringstream in(line);
            std::string eps_str, seed_str, x_str, err_str;
            std::getline(in, eps_str, ',');
            std::getline(in, seed_str, ',');
            std::getline(in, x_str, ',');
            std::getline(in, err_str, ',');
            CHECK(std::stod(err_str) == 0.0);
        }
    }

    SUBCASE("loglaw") {
        CHECK(cmd_study(StudyKind::Loglaw, path, dir / "out", std::nullopt) == 0);
        CHECK(std::filesystem::exists(dir / "out" / "loglaw.json"));
    }

    SUBCASE("study verdict failure exits 4") {
        // a grid this coarse floors every interior probe, so the rate fit at
        // x = 0.5 has no usable points and its verdict honestly fails
        std::string text = small_config("two_mode_decay", "");
        text += "[discretization]\nn_x = 5\n";
        text += "[plan]\nepsilons = 1e-05 1e-06\n";
        const auto coarse = write_config(dir, text);
        CHECK(cmd_study(StudyKind::Convergence, coarse, dir / "out", std::nullopt) == 4);
    }

    std::filesystem::remove_all(dir);
}

TEST_CASE("parse_study_kind maps the dispatch names") {
    CHECK(parse_study_kind("convergence") == StudyKind::Convergence);
    CHECK(parse_study_kind("stability") == StudyKind::Stability);
    CHECK(parse_study_kind("loglaw") == StudyKind::Loglaw);
    CHECK(parse_study_kind("blowup") == StudyKind::Blowup);
    CHECK_FALSE(parse_study_kind("nope").has_value());
}
