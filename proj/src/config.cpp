#include "sgreg/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "sgreg/errors.hpp"
#include "sgreg/io.hpp"

namespace sgreg {

namespace {

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

struct ParseContext {
    std::string origin;
    int line = 0;

    [[noreturn]] void fail(const std::string& message) const {
        throw ConfigError(origin + ":" + std::to_string(line) + ": " + message);
    }
};

double parse_double(const std::string& token, const ParseContext& ctx, const std::string& key) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const std::from_chars_result res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last) {
        ctx.fail("key '" + key + "': cannot parse '" + token + "' as a number");
    }
    return value;
}

template <typename Int>
Int parse_int(const std::string& token, const ParseContext& ctx, const std::string& key) {
    Int value = 0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const std::from_chars_result res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last) {
        ctx.fail("key '" + key + "': cannot parse '" + token + "' as an integer");
    }
    return value;
}

bool parse_bool(const std::string& token, const ParseContext& ctx, const std::string& key) {
    if (token == "true" || token == "on" || token == "1") {
        return true;
    }
    if (token == "false" || token == "off" || token == "0") {
        return false;
    }
    ctx.fail("key '" + key + "': cannot parse '" + token + "' as a boolean");
}

std::vector<std::string> split_tokens(const std::string& value) {
    std::vector<std::string> tokens;
    std::istringstream in(value);
    std::string token;
    while (in >> token) {
        tokens.push_back(token);
    }
    return tokens;
}

std::vector<double> parse_double_list(const std::string& value, const ParseContext& ctx,
                                      const std::string& key) {
    std::vector<double> out;
    for (const std::string& token : split_tokens(value)) {
        out.push_back(parse_double(token, ctx, key));
    }
    if (out.empty()) {
        ctx.fail("key '" + key + "': expected at least one value");
    }
    return out;
}

Matrix2 parse_matrix2(const std::string& value, const ParseContext& ctx,
                      const std::string& key) {
    const std::vector<double> entries = parse_double_list(value, ctx, key);
    if (entries.size() != 4) {
        ctx.fail("key '" + key + "': expected 4 row-major entries, got " +
                 std::to_string(entries.size()));
    }
    return Matrix2{{{entries[0], entries[1]}, {entries[2], entries[3]}}};
}

}  // namespace

void RunConfig::validate() const {
    auto rethrow = [](const char* section, const auto& fn) {
        try {
            fn();
        } catch (const std::invalid_argument& err) {
            throw ConfigError(std::string("config [") + section + "]: " + err.what());
        }
    };
    rethrow("problem", [&] { problem.validate(); });
    rethrow("discretization", [&] { disc.validate(); });
    rethrow("regularization", [&] { reg.validate(); });
    rethrow("plan", [&] { plan.validate(problem.a); });

    const std::vector<std::string> recipes = manufactured_recipes();
    if (std::find(recipes.begin(), recipes.end(), recipe) == recipes.end()) {
        throw ConfigError("config [problem]: unknown recipe '" + recipe + "'");
    }
    if (!(std::pow(problem.a, reg.k) > reg.k * reg.beta)) {
        throw ConfigError("config [regularization]: filter-bound hypothesis a^k > k*beta "
                          "violated (a=" + format_double(problem.a) + ", k=" +
                          format_double(reg.k) + ", beta=" + format_double(reg.beta) + ")");
    }
    if (data) {
        rethrow("data", [&] { data->validate(); });
        if (data->u0.n_modes() != disc.basis.n_modes) {
            throw ConfigError("config [data]: fields carry " +
                              std::to_string(data->u0.n_modes()) + " coefficients, basis has " +
                              std::to_string(disc.basis.n_modes) + " modes");
        }
    }
    if (output_dir.empty()) {
        throw ConfigError("config [output]: dir must not be empty");
    }
}

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
    RunConfig config;
    ParseContext ctx{origin, 0};
    std::string section;
    bool beta_seen = false;

    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        ++ctx.line;
        const auto comment = raw.find('#');
        if (comment != std::string::npos) {
            raw = raw.substr(0, comment);
        }
        const std::string line = trim(raw);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                ctx.fail("unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section != "problem" && section != "discretization" &&
                section != "regularization" && section != "plan" && section != "data" &&
                section != "output") {
                ctx.fail("unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            ctx.fail("expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            ctx.fail("expected 'key = value'");
        }
        if (section.empty()) {
            ctx.fail("key '" + key + "' appears before any section header");
        }

        if (section == "problem") {
            if (key == "a") {
                config.problem.a = parse_double(value, ctx, key);
            } else if (key == "b") {
                config.problem.b = parse_double(value, ctx, key);
            } else if (key == "alpha1") {
                config.problem.alpha1 = parse_double(value, ctx, key);
            } else if (key == "alpha2") {
                config.problem.alpha2 = parse_double(value, ctx, key);
            } else if (key == "gamma1") {
                config.problem.gamma1 = parse_double(value, ctx, key);
            } else if (key == "gamma2") {
                config.problem.gamma2 = parse_double(value, ctx, key);
            } else if (key == "delta") {
                config.problem.delta = parse_matrix2(value, ctx, key);
            } else if (key == "sigma") {
                config.problem.sigma = parse_matrix2(value, ctx, key);
            } else if (key == "recipe") {
                config.recipe = value;
            } else {
                ctx.fail("unknown key '" + key + "' in [problem]");
            }
        } else if (section == "discretization") {
            if (key == "n_modes") {
                config.disc.basis.n_modes = parse_int<int>(value, ctx, key);
            } else if (key == "n_quad") {
                config.disc.basis.n_quad = parse_int<int>(value, ctx, key);
            } else if (key == "n_x") {
                config.disc.n_x = parse_int<int>(value, ctx, key);
            } else if (key == "picard_tol") {
                config.disc.picard_tol = parse_double(value, ctx, key);
            } else if (key == "picard_max_iters") {
                config.disc.picard_max_iters = parse_int<int>(value, ctx, key);
            } else {
                ctx.fail("unknown key '" + key + "' in [discretization]");
            }
        } else if (section == "regularization") {
            if (key == "epsilon") {
                config.reg.epsilon = parse_double(value, ctx, key);
            } else if (key == "m") {
                config.reg.m = parse_double(value, ctx, key);
            } else if (key == "k") {
                config.reg.k = parse_double(value, ctx, key);
            } else if (key == "beta") {
                config.reg.beta = parse_double(value, ctx, key);
                beta_seen = true;
            } else if (key == "noise") {
                config.noise = parse_bool(value, ctx, key);
            } else {
                ctx.fail("unknown key '" + key + "' in [regularization]");
            }
        } else if (section == "plan") {
            if (key == "epsilons") {
                config.plan.epsilons = parse_double_list(value, ctx, key);
            } else if (key == "m") {
                config.plan.m = parse_double(value, ctx, key);
            } else if (key == "k") {
                config.plan.k = parse_double(value, ctx, key);
            } else if (key == "seeds") {
                config.plan.seeds.clear();
                for (const std::string& token : split_tokens(value)) {
                    config.plan.seeds.push_back(parse_int<std::uint64_t>(token, ctx, key));
                }
            } else if (key == "probe_x") {
                config.plan.probe_x = parse_double_list(value, ctx, key);
            } else {
                ctx.fail("unknown key '" + key + "' in [plan]");
            }
        } else if (section == "data") {
            if (!config.data) {
                config.data = CauchyData{};
            }
            SpectralField field;
            field.coeffs = parse_double_list(value, ctx, key);
            if (key == "u0") {
                config.data->u0 = std::move(field);
            } else if (key == "u1") {
                config.data->u1 = std::move(field);
            } else if (key == "v0") {
                config.data->v0 = std::move(field);
            } else if (key == "v1") {
                config.data->v1 = std::move(field);
            } else {
                ctx.fail("unknown key '" + key + "' in [data]");
            }
        } else if (section == "output") {
            if (key == "dir") {
                config.output_dir = value;
            } else {
                ctx.fail("unknown key '" + key + "' in [output]");
            }
        }
    }

    config.beta_overridden = beta_seen;
    if (!beta_seen) {
        config.reg.beta = std::pow(config.reg.epsilon, config.reg.m);
    }
    // The y-domain length rides along with the basis wherever the basis goes.
    config.disc.basis.b = config.problem.b;
    config.validate();
    return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in.is_open()) {
        throw ConfigError("config: cannot open '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str(), path.filename().string());
}

std::string serialize_run_config(const RunConfig& config) {
    std::ostringstream out;
    const ProblemSpec& p = config.problem;
    out << "[problem]\n";
    out << "a = " << format_double(p.a) << "\n";
    out << "b = " << format_double(p.b) << "\n";
    out << "alpha1 = " << format_double(p.alpha1) << "\n";
    out << "alpha2 = " << format_double(p.alpha2) << "\n";
    out << "gamma1 = " << format_double(p.gamma1) << "\n";
    out << "gamma2 = " << format_double(p.gamma2) << "\n";
    out << "delta = " << format_double(p.delta[0][0]) << " " << format_double(p.delta[0][1])
        << " " << format_double(p.delta[1][0]) << " " << format_double(p.delta[1][1]) << "\n";
    out << "sigma = " << format_double(p.sigma[0][0]) << " " << format_double(p.sigma[0][1])
        << " " << format_double(p.sigma[1][0]) << " " << format_double(p.sigma[1][1]) << "\n";
    out << "recipe = " << config.recipe << "\n";

    out << "\n[discretization]\n";
    out << "n_modes = " << config.disc.basis.n_modes << "\n";
    out << "n_quad = " << config.disc.basis.n_quad << "\n";
    out << "n_x = " << config.disc.n_x << "\n";
    out << "picard_tol = " << format_double(config.disc.picard_tol) << "\n";
    out << "picard_max_iters = " << config.disc.picard_max_iters << "\n";

    out << "\n[regularization]\n";
    out << "epsilon = " << format_double(config.reg.epsilon) << "\n";
    out << "m = " << format_double(config.reg.m) << "\n";
    out << "k = " << format_double(config.reg.k) << "\n";
    if (config.beta_overridden) {
        out << "beta = " << format_double(config.reg.beta) << "\n";
    }
    if (!config.noise) {
        out << "noise = false\n";
    }

    out << "\n[plan]\n";
    out << "epsilons =";
    for (double eps : config.plan.epsilons) {
        out << " " << format_double(eps);
    }
    out << "\n";
    out << "m = " << format_double(config.plan.m) << "\n";
    out << "k = " << format_double(config.plan.k) << "\n";
    out << "seeds =";
    for (std::uint64_t seed : config.plan.seeds) {
        out << " " << seed;
    }
    out << "\n";
    out << "probe_x =";
    for (double x : config.plan.probe_x) {
        out << " " << format_double(x);
    }
    out << "\n";

    if (config.data) {
        out << "\n[data]\n";
        const auto write_field = [&out](const char* key, const SpectralField& field) {
            out << key << " =";
            for (double c : field.coeffs) {
                out << " " << format_double(c);
            }
            out << "\n";
        };
        write_field("u0", config.data->u0);
        write_field("u1", config.data->u1);
        write_field("v0", config.data->v0);
        write_field("v1", config.data->v1);
    }

    out << "\n[output]\n";
    out << "dir = " << config.output_dir << "\n";
    return out.str();
}

void save_run_config(const RunConfig& config, const std::filesystem::path& path) {
    write_text_atomic(path, serialize_run_config(config));
}

}  // namespace sgreg
