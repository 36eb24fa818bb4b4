#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <string>

#include "sgreg/config.hpp"
#include "sgreg/errors.hpp"
#include "sgreg/io.hpp"

using namespace sgreg;

namespace {

const std::string kSampleConfig = R"(# sample run
[problem]
a = 1
b = 3.141592653589793
alpha1 = 1
alpha2 = 1.5
gamma1 = 1
gamma2 = 1
delta = 1 0.5 -0.5 1
sigma = 0 0 0 0
recipe = two_mode_decay

[discretization]
n_modes = 16
n_quad = 64
n_x = 51
picard_tol = 1e-10
picard_max_iters = 200

[regularization]
epsilon = 0.01
m = 1
k = 1

[plan]
epsilons = 0.01 0.001 0.0001
m = 1
k = 1
seeds = 1 2 3
probe_x = 0 0.25 0.5

[output]
dir = out
)";

}  // namespace

TEST_CASE("config parsing fills every section") {
    const RunConfig config = parse_run_config(kSampleConfig, "sample");
    CHECK(config.problem.a == 1.0);
    CHECK(config.problem.alpha2 == 1.5);
    CHECK(config.problem.delta[1][0] == -0.5);
    CHECK(config.recipe == "two_mode_decay");
    CHECK(config.disc.basis.n_modes == 16);
    CHECK(config.disc.basis.b == config.problem.b);
    CHECK(config.disc.n_x == 51);
    CHECK(config.reg.epsilon == 0.01);
    CHECK(config.reg.beta == doctest::Approx(0.01).epsilon(1e-15));
    CHECK_FALSE(config.beta_overridden);
    CHECK(config.noise);
    CHECK(config.plan.epsilons.size() == 3);
    CHECK(config.plan.seeds.size() == 3);
    CHECK(config.output_dir == "out");
}

TEST_CASE("config round-trips through serialization") {
    const RunConfig config = parse_run_config(kSampleConfig, "sample");
    const std::string text = serialize_run_config(config);
    const RunConfig reloaded = parse_run_config(text, "roundtrip");
    CHECK(reloaded == config);

    SUBCASE("beta override survives the round trip") {
        RunConfig with_beta = config;
        with_beta.beta_overridden = true;
        with_beta.reg.beta = 0.05;
        const RunConfig again =
            parse_run_config(serialize_run_config(with_beta), "roundtrip");
        CHECK(again == with_beta);
    }

    SUBCASE("noise flag survives the round trip") {
        RunConfig quiet = config;
        quiet.noise = false;
        const RunConfig again = parse_run_config(serialize_run_config(quiet), "roundtrip");
        CHECK(again == quiet);
    }

    SUBCASE("explicit Cauchy data survives the round trip") {
        RunConfig with_data = config;
        CauchyData data;
        data.u0 = SpectralField::zero(16);
        data.u1 = SpectralField::zero(16);
        data.v0 = SpectralField::zero(16);
        data.v1 = SpectralField::zero(16);
        data.u0.coeffs[0] = 1.25;
        data.u1.coeffs[0] = -0.5;
        data.v0.coeffs[3] = 1e-3;
        with_data.data = data;
        const RunConfig again =
            parse_run_config(serialize_run_config(with_data), "roundtrip");
        CHECK(again == with_data);
    }
}

TEST_CASE("explicit data must match the basis truncation") {
    std::string text = kSampleConfig;
    text += "\n[data]\nu0 = 1 0\nu1 = 0 0\nv0 = 0 0\nv1 = 0 0\n";  // 2 != 16 modes
    CHECK_THROWS_AS(parse_run_config(text, "data.conf"), ConfigError);
}

TEST_CASE("config save and load through the filesystem") {
    const RunConfig config = parse_run_config(kSampleConfig, "sample");
    const auto dir = std::filesystem::temp_directory_path() / "sgreg_config_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "run.conf";
    save_run_config(config, path);
    CHECK(load_run_config(path) == config);
    std::filesystem::remove_all(dir);

    CHECK_THROWS_AS(load_run_config(dir / "missing.conf"), ConfigError);
}

TEST_CASE("malformed configs carry line diagnostics") {
    SUBCASE("unknown key") {
        std::string text = kSampleConfig;
        text += "\n[problem]\nwhat = 3\n";
        try {
            parse_run_config(text, "bad.conf");
            FAIL("expected ConfigError");
        } catch (const ConfigError& err) {
            const std::string message = err.what();
            CHECK(message.find("bad.conf:") != std::string::npos);
            CHECK(message.find("what") != std::string::npos);
        }
    }

    SUBCASE("unknown section") {
        CHECK_THROWS_AS(parse_run_config("[nope]\nx = 1\n", "bad.conf"), ConfigError);
    }

    SUBCASE("unparsable number") {
        std::string text = "[problem]\na = banana\n";
        CHECK_THROWS_AS(parse_run_config(text, "bad.conf"), ConfigError);
    }

    SUBCASE("wrong matrix arity") {
        std::string text = "[problem]\ndelta = 1 2 3\n";
        CHECK_THROWS_AS(parse_run_config(text, "bad.conf"), ConfigError);
    }

    SUBCASE("key before any section") {
        CHECK_THROWS_AS(parse_run_config("a = 1\n", "bad.conf"), ConfigError);
    }
}

TEST_CASE("config validation re-checks module invariants") {
    SUBCASE("filter hypothesis violations name the inequality") {
        std::string text = kSampleConfig;
        text += "\n[regularization]\nbeta = 2\n";
        try {
            parse_run_config(text, "hypothesis.conf");
            FAIL("expected ConfigError");
        } catch (const ConfigError& err) {
            CHECK(std::string(err.what()).find("a^k > k*beta") != std::string::npos);
        }
    }

    SUBCASE("unknown recipe") {
        std::string text = kSampleConfig;
        text += "\n[problem]\nrecipe = nonsense\n";
        CHECK_THROWS_AS(parse_run_config(text, "recipe.conf"), ConfigError);
    }

    SUBCASE("discretization invariants") {
        std::string text = kSampleConfig;
        text += "\n[discretization]\nn_quad = 8\n";  // below the 4N floor
        CHECK_THROWS_AS(parse_run_config(text, "quad.conf"), ConfigError);
    }

    SUBCASE("plan invariants") {
        std::string text = kSampleConfig;
        text += "\n[plan]\nepsilons = 0.001 0.01\n";  // not decreasing
        CHECK_THROWS_AS(parse_run_config(text, "plan.conf"), ConfigError);
    }
}

TEST_CASE("format_double is shortest round-trip") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-10) == "1e-10");
    CHECK(format_double(0.0) == "0");
    const double value = 2.2422315301555922;
    CHECK(std::stod(format_double(value)) == value);
}
