#include "sgreg/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "sgreg/config.hpp"
#include "sgreg/errors.hpp"
#include "sgreg/io.hpp"
#include "sgreg/kernel.hpp"
#include "sgreg/study.hpp"

namespace sgreg {

namespace {

constexpr int kExitPass = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitVerdict = 4;

std::filesystem::path resolve_out_dir(const RunConfig& config,
                                      const std::optional<std::filesystem::path>& out_dir) {
    return out_dir ? *out_dir : std::filesystem::path(config.output_dir);
}

SpectralField random_band_limited_field(int n_modes, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    SpectralField f = SpectralField::zero(n_modes);
    for (double& c : f.coeffs) {
        c = dist(engine);
    }
    return f;
}

double quadrature_l2_norm(const GridFunction& g, const BasisConfig& cfg) {
    GridFunction squared = g;
    for (double& v : squared.values) {
        v *= v;
    }
    return std::sqrt(quadrature_integral(squared, cfg));
}

bool check_orthonormality(const BasisConfig& basis, double tolerance) {
    const std::vector<double> nodes = quadrature_nodes(basis);
    const std::vector<double> weights = quadrature_weights(basis);
    double worst = 0.0;
    for (int n = 1; n <= basis.n_modes; ++n) {
        for (int m = n; m <= basis.n_modes; ++m) {
            double acc = 0.0;
            for (size_t q = 0; q < nodes.size(); ++q) {
                acc += weights[q] * eigenfunction_at(n, nodes[q], basis) *
                       eigenfunction_at(m, nodes[q], basis);
            }
            const double expected = (n == m) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(acc - expected));
        }
    }
    return worst <= tolerance;
}

bool check_parseval(const BasisConfig& basis, double tolerance) {
    const SpectralField f = random_band_limited_field(basis.n_modes, 2026);
    const GridFunction g = synthesize(f, quadrature_nodes(basis), basis);
    const SpectralField back = analyze(g, basis);
    double worst = 0.0;
    for (size_t i = 0; i < f.coeffs.size(); ++i) {
        worst = std::max(worst, std::abs(f.coeffs[i] - back.coeffs[i]));
    }
    const double norm_gap = std::abs(l2_norm(f) - quadrature_l2_norm(g, basis));
    return worst <= tolerance && norm_gap <= tolerance;
}

bool check_filter_degeneracy(double alpha, double a, const BasisConfig& basis,
                             double rel_tolerance) {
    const KernelParams p{alpha, a, 1.0, 0.0};
    const int n_max = std::min(basis.n_modes, 50);
    for (int n = 1; n <= n_max; ++n) {
        const double lambda = eigenvalue(n, basis);
        const double s = std::sqrt(alpha * lambda);
        for (int i = 0; i <= 20; ++i) {
            const double x = a * static_cast<double>(i) / 20.0;
            const double expected = 0.5 * std::exp(s * x);
            if (!std::isfinite(expected)) {
                continue;
            }
            const double got = filter_value(p, lambda, x);
            if (std::abs(got - expected) > rel_tolerance * expected) {
                return false;
            }
        }
    }
    return true;
}

bool check_filter_monotonicity(double alpha, double a, const BasisConfig& basis) {
    const std::vector<double> betas = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
    for (int n : {1, 5, 20}) {
        if (n > basis.n_modes) {
            continue;
        }
        const double lambda = eigenvalue(n, basis);
        for (double frac : {0.25, 0.5, 1.0}) {
            const double x = frac * a;
            double previous = -1.0;
            // betas descend, so the filter must strictly increase along them
            for (double beta : betas) {
                const double value = filter_value(KernelParams{alpha, a, 1.0, beta}, lambda, x);
                if (previous >= 0.0 && !(value > previous)) {
                    return false;
                }
                previous = value;
            }
        }
    }
    return true;
}

bool check_filter_boundary_cap(double alpha, double a, const BasisConfig& basis) {
    for (double beta : {0.0, 1e-6, 1e-3, 1e-1, 1.0}) {
        const KernelParams p{alpha, a, 1.0, beta};
        for (int n = 1; n <= std::min(basis.n_modes, 50); ++n) {
            if (filter_value(p, eigenvalue(n, basis), 0.0) > 0.5) {
                return false;
            }
        }
    }
    return true;
}

bool check_lipschitz_bound(const ProblemSpec& spec, const BasisConfig& basis) {
    ProblemSpec local = spec;
    local.f1.assign(1, SpectralField::zero(basis.n_modes));
    local.f2.assign(1, SpectralField::zero(basis.n_modes));
    const std::vector<double> nodes = quadrature_nodes(basis);
    std::mt19937_64 engine(7);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    auto random_grid = [&] {
        GridFunction g;
        g.nodes = nodes;
        g.values.resize(nodes.size());
        for (double& v : g.values) {
            v = dist(engine);
        }
        return g;
    };
    auto grid_gap = [&](const GridFunction& lhs, const GridFunction& rhs) {
        GridFunction d = lhs;
        for (size_t i = 0; i < d.values.size(); ++i) {
            d.values[i] -= rhs.values[i];
        }
        return quadrature_l2_norm(d, basis);
    };
    for (int trial = 0; trial < 16; ++trial) {
        const GridFunction u = random_grid(), v = random_grid();
        const GridFunction uu = random_grid(), vv = random_grid();
        for (int which = 1; which <= 2; ++which) {
            const int row = which - 1;
            const double gamma = (which == 1) ? local.gamma1 : local.gamma2;
            const double bound_u =
                std::abs(gamma) * std::abs(local.delta[row][0]) + std::abs(local.sigma[row][0]);
            const double bound_v =
                std::abs(gamma) * std::abs(local.delta[row][1]) + std::abs(local.sigma[row][1]);
            const double lhs = grid_gap(nonlinearity(which, local, 0, u, v),
                                        nonlinearity(which, local, 0, uu, vv));
            const double rhs = bound_u * grid_gap(u, uu) + bound_v * grid_gap(v, vv);
            if (lhs > rhs * (1.0 + 1e-12) + 1e-12) {
                return false;
            }
        }
    }
    return true;
}

bool check_gevrey_l2_degeneracy(const BasisConfig& basis) {
    const SpectralField f = random_band_limited_field(basis.n_modes, 99);
    return gevrey_norm(f, GevreyParams{0.0, 0.0}, basis) == l2_norm(f);
}

bool check_noise_calibration(const BasisConfig& basis) {
    CauchyData data;
    data.u0 = random_band_limited_field(basis.n_modes, 1);
    data.u1 = random_band_limited_field(basis.n_modes, 2);
    data.v0 = random_band_limited_field(basis.n_modes, 3);
    data.v1 = random_band_limited_field(basis.n_modes, 4);
    for (double epsilon : {1e-2, 1e-4, 1e-6}) {
        const NoisySample sample = make_noisy(data, epsilon, 42);
        const SpectralField* originals[] = {&data.u0, &data.v0, &data.u1, &data.v1};
        const SpectralField* noisy[] = {&sample.data.u0, &sample.data.v0, &sample.data.u1,
                                        &sample.data.v1};
        for (int i = 0; i < 4; ++i) {
            double acc = 0.0;
            for (size_t c = 0; c < originals[i]->coeffs.size(); ++c) {
                const double d = noisy[i]->coeffs[c] - originals[i]->coeffs[c];
                acc += d * d;
            }
            const double tol = 4.0 * std::numeric_limits<double>::epsilon() *
                               (epsilon + l2_norm(*originals[i]));
            if (std::abs(std::sqrt(acc) - epsilon) > tol) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

std::optional<StudyKind> parse_study_kind(const std::string& name) {
    if (name == "convergence") {
        return StudyKind::Convergence;
    }
    if (name == "stability") {
        return StudyKind::Stability;
    }
    if (name == "loglaw") {
        return StudyKind::Loglaw;
    }
    if (name == "blowup") {
        return StudyKind::Blowup;
    }
    return std::nullopt;
}

int cmd_verify(const std::filesystem::path& config_path) {
    RunConfig config;
    try {
        config = load_run_config(config_path);
    } catch (const ConfigError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitConfig;
    }

    const BasisConfig& basis = config.disc.basis;
    const double a = config.problem.a;
    std::vector<std::pair<std::string, bool>> verdicts;
    verdicts.emplace_back("basis_orthonormality", check_orthonormality(basis, 1e-10));
    verdicts.emplace_back("basis_parseval", check_parseval(basis, 1e-10));
    verdicts.emplace_back("filter_degeneracy",
                          check_filter_degeneracy(config.problem.alpha1, a, basis, 1e-13));
    verdicts.emplace_back("filter_beta_monotonicity",
                          check_filter_monotonicity(config.problem.alpha1, a, basis));
    verdicts.emplace_back("filter_boundary_cap",
                          check_filter_boundary_cap(config.problem.alpha1, a, basis));
    verdicts.emplace_back("model_lipschitz_bound",
                          check_lipschitz_bound(config.problem, basis));
    verdicts.emplace_back("model_gevrey_l2", check_gevrey_l2_degeneracy(basis));
    verdicts.emplace_back("model_noise_calibration", check_noise_calibration(basis));

    const std::vector<double> betas = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
    bool bound_ok = true;
    bool shifted_ok = true;
    for (double alpha : {0.5, 1.0, 2.0}) {
        const StudyReport sweep = run_lemma_sweep(a, {1.0, 2.0, 3.0}, betas, 200, alpha);
        bound_ok = bound_ok && sweep.verdict("filter_bound_ok");
        shifted_ok = shifted_ok && sweep.verdict("shifted_filter_bound_ok");
    }
    verdicts.emplace_back("filter_bound_sweep", bound_ok);
    verdicts.emplace_back("shifted_filter_bound_sweep", shifted_ok);

    bool all_ok = true;
    for (const auto& [name, ok] : verdicts) {
        std::cout << name << ": " << (ok ? "ok" : "FAIL") << "\n";
        all_ok = all_ok && ok;
    }
    std::cout << "verify: " << (all_ok ? "PASS" : "FAIL") << "\n";
    return all_ok ? kExitPass : kExitVerdict;
}

int cmd_solve(const std::filesystem::path& config_path,
              const std::optional<std::filesystem::path>& out_dir,
              std::optional<std::uint64_t> seed_override) {
    RunConfig config;
    try {
        config = load_run_config(config_path);
    } catch (const ConfigError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitConfig;
    }

    const std::uint64_t seed = seed_override.value_or(config.plan.seeds.front());
    const std::filesystem::path dir = resolve_out_dir(config, out_dir);
    try {
        const Manufactured problem =
            manufactured_problem(config.recipe, config.problem, config.disc);
        const CauchyData& base = config.data ? *config.data : problem.data;
        const CauchyData data = config.noise
                                    ? make_noisy(base, config.reg.epsilon, seed).data
                                    : base;
        const SolveResult solved = solve_regularized(problem.spec, data, config.reg, config.disc);

        std::ostringstream csv;
        csv << "x,mode,u_coeff,v_coeff\n";
        for (size_t j = 0; j < solved.trajectory.x_nodes.size(); ++j) {
            for (int n = 1; n <= config.disc.basis.n_modes; ++n) {
                const size_t ns = static_cast<size_t>(n - 1);
                csv << format_double(solved.trajectory.x_nodes[j]) << ',' << n << ','
                    << format_double(solved.trajectory.u[j].coeffs[ns]) << ','
                    << format_double(solved.trajectory.v[j].coeffs[ns]) << '\n';
            }
        }
        write_text_atomic(dir / "trajectory.csv", csv.str());

        nlohmann::json diag;
        diag["converged"] = solved.diagnostics.converged;
        diag["iterations"] = solved.diagnostics.iterations;
        diag["residual"] = solved.diagnostics.residual;
        diag["successive_diffs"] = solved.diagnostics.successive_diffs;
        diag["epsilon"] = config.reg.epsilon;
        diag["beta"] = config.reg.beta;
        diag["seed"] = seed;
        diag["noise"] = config.noise;
        diag["recipe"] = config.recipe;
        write_text_atomic(dir / "diagnostics.json", diag.dump(2) + "\n");

        if (!solved.diagnostics.converged) {
            std::cerr << "solve: no convergence after " << solved.diagnostics.iterations
                      << " iterations (last diff "
                      << format_double(solved.diagnostics.successive_diffs.back()) << ")\n";
            return kExitNoConvergence;
        }
        std::cout << "solve: converged in " << solved.diagnostics.iterations
                  << " iterations, artifacts in " << dir.string() << "\n";
        return kExitPass;
    } catch (const ConfigError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitConfig;
    }
}

int cmd_study(StudyKind kind, const std::filesystem::path& config_path,
              const std::optional<std::filesystem::path>& out_dir,
              std::optional<std::uint64_t> seed_override) {
    RunConfig config;
    try {
        config = load_run_config(config_path);
    } catch (const ConfigError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitConfig;
    }
    if (seed_override && !config.plan.seeds.empty()) {
        config.plan.seeds.front() = *seed_override;
    }

    const std::filesystem::path dir = resolve_out_dir(config, out_dir);
    std::string name;
    StudyReport report;
    try {
        const Manufactured problem =
            manufactured_problem(config.recipe, config.problem, config.disc);
        if (config.data && kind != StudyKind::Stability) {
            throw ConfigError("config [data]: explicit Cauchy data only drives solve and "
                              "stability runs; this study measures errors against the "
                              "recipe's truth");
        }
        switch (kind) {
            case StudyKind::Convergence: {
                name = "convergence";
                if (config.plan.epsilons.size() < 2) {
                    throw ConfigError("config [plan]: a convergence study needs at least two "
                                      "noise levels");
                }
                report = run_convergence_study(problem, config.plan, config.disc);
                break;
            }
            case StudyKind::Stability: {
                name = "stability";
                if (config.plan.seeds.size() < 2) {
                    throw ConfigError("config [plan]: a stability study needs two seeds");
                }
                report = run_stability_check(problem.spec,
                                             config.data ? *config.data : problem.data,
                                             config.reg, config.disc, config.plan.seeds[0],
                                             config.plan.seeds[1], config.reg.epsilon);
                break;
            }
            case StudyKind::Loglaw: {
                name = "loglaw";
                if (config.plan.epsilons.size() < 2) {
                    throw ConfigError("config [plan]: the log-law check needs at least two "
                                      "noise levels");
                }
                SweepPlan plan = config.plan;
                plan.probe_x = {config.problem.a};
                report = run_loglaw_check(problem, plan, config.disc);
                break;
            }
            case StudyKind::Blowup: {
                name = "blowup";
                report = run_blowup_contrast(problem, config.reg.epsilon, config.disc,
                                             config.plan.seeds.front());
                break;
            }
        }
    } catch (const ConfigError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitConfig;
    } catch (const StudyError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitNoConvergence;
    }

    write_report_csv(report, dir / (name + ".csv"));
    write_report_json(report, dir / (name + ".json"));
    for (const auto& [verdict, ok] : report.verdicts) {
        std::cout << verdict << ": " << (ok ? "ok" : "FAIL") << "\n";
    }
    std::cout << "study " << name << ": " << (report.all_ok() ? "PASS" : "FAIL")
              << " (artifacts in " << dir.string() << ")\n";
    return report.all_ok() ? kExitPass : kExitVerdict;
}

}  // namespace sgreg
