#include "sgreg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sgreg/errors.hpp"
#include "sgreg/kernel.hpp"

namespace sgreg {

void Discretization::validate() const {
    basis.validate();
    if (n_x < 2) {
        throw std::invalid_argument("solver: n_x must be >= 2, got " + std::to_string(n_x));
    }
    if (!(picard_tol > 0.0)) {
        throw std::invalid_argument("solver: picard_tol must be positive");
    }
    if (picard_max_iters < 1) {
        throw std::invalid_argument("solver: picard_max_iters must be >= 1");
    }
}

RegularizationConfig RegularizationConfig::from_noise(double epsilon, double m, double k) {
    RegularizationConfig reg;
    reg.epsilon = epsilon;
    reg.m = m;
    reg.k = k;
    reg.beta = std::pow(epsilon, m);
    reg.validate();
    return reg;
}

void RegularizationConfig::validate() const {
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("solver: epsilon must be positive, got " +
                                    std::to_string(epsilon));
    }
    if (!(m > 0.0) || !(m <= 1.0)) {
        throw std::invalid_argument("solver: exponent m must lie in (0, 1], got " +
                                    std::to_string(m));
    }
    if (!(k >= 1.0)) {
        throw std::invalid_argument("solver: kernel order k must be >= 1, got " +
                                    std::to_string(k));
    }
    if (!(beta >= 0.0)) {
        throw std::invalid_argument("solver: beta must be >= 0, got " + std::to_string(beta));
    }
}

std::vector<double> x_grid(double a, int n_x) {
    std::vector<double> nodes(static_cast<size_t>(n_x));
    const double h = a / static_cast<double>(n_x - 1);
    for (int j = 0; j < n_x; ++j) {
        nodes[static_cast<size_t>(j)] = static_cast<double>(j) * h;
    }
    nodes.back() = a;
    return nodes;
}

namespace {

void require_solver_inputs(const ProblemSpec& spec, const CauchyData& data,
                           const Discretization& disc) {
    spec.validate();
    data.validate();
    disc.validate();
    const int n_modes = disc.basis.n_modes;
    if (data.u0.n_modes() != n_modes) {
        throw GridMismatchError("solver: Cauchy data has " + std::to_string(data.u0.n_modes()) +
                                " modes, basis has " + std::to_string(n_modes));
    }
    if (static_cast<int>(spec.f1.size()) != disc.n_x ||
        static_cast<int>(spec.f2.size()) != disc.n_x) {
        throw GridMismatchError("solver: forcing grids (" + std::to_string(spec.f1.size()) + ", " +
                                std::to_string(spec.f2.size()) + " nodes) do not match n_x=" +
                                std::to_string(disc.n_x));
    }
    for (int j = 0; j < disc.n_x; ++j) {
        if (spec.f1[static_cast<size_t>(j)].n_modes() != n_modes ||
            spec.f2[static_cast<size_t>(j)].n_modes() != n_modes) {
            throw GridMismatchError("solver: forcing field at node " + std::to_string(j) +
                                    " does not match the basis truncation");
        }
    }
}

/// Projections of F1, F2 at every x-node for a given trajectory state.
struct ForcingProjection {
    std::vector<std::vector<double>> f1;  // [x][mode]
    std::vector<std::vector<double>> f2;
};

ForcingProjection project_nonlinearity(const ProblemSpec& spec, const Discretization& disc,
                                       const std::vector<SpectralField>& u,
                                       const std::vector<SpectralField>& v,
                                       const std::vector<double>& y_nodes) {
    const int m = disc.n_x;
    ForcingProjection out;
    out.f1.resize(static_cast<size_t>(m));
    out.f2.resize(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        const size_t js = static_cast<size_t>(j);
        const GridFunction u_grid = synthesize(u[js], y_nodes, disc.basis);
        const GridFunction v_grid = synthesize(v[js], y_nodes, disc.basis);
        out.f1[js] = analyze(nonlinearity(1, spec, j, u_grid, v_grid), disc.basis).coeffs;
        out.f2[js] = analyze(nonlinearity(2, spec, j, u_grid, v_grid), disc.basis).coeffs;
    }
    return out;
}

double pair_distance(const std::vector<SpectralField>& ua, const std::vector<SpectralField>& va,
                     const std::vector<SpectralField>& ub, const std::vector<SpectralField>& vb) {
    double sup = 0.0;
    for (size_t j = 0; j < ua.size(); ++j) {
        double acc = 0.0;
        for (size_t n = 0; n < ua[j].coeffs.size(); ++n) {
            const double du = ua[j].coeffs[n] - ub[j].coeffs[n];
            const double dv = va[j].coeffs[n] - vb[j].coeffs[n];
            acc += du * du + dv * dv;
        }
        if (std::isnan(acc)) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        sup = std::max(sup, std::sqrt(acc));
    }
    return sup;
}

}  // namespace

SolveResult solve_regularized(const ProblemSpec& spec, const CauchyData& data,
                              const RegularizationConfig& reg, const Discretization& disc) {
    require_solver_inputs(spec, data, disc);
    reg.validate();
    if (!(std::pow(spec.a, reg.k) > reg.k * reg.beta)) {
        throw ConfigError("solver: filter hypothesis a^k > k*beta violated (a=" +
                          std::to_string(spec.a) + ", k=" + std::to_string(reg.k) +
                          ", beta=" + std::to_string(reg.beta) + ")");
    }

    const int m = disc.n_x;
    const int n_modes = disc.basis.n_modes;
    const double h = spec.a / static_cast<double>(m - 1);
    const std::vector<double> nodes = x_grid(spec.a, m);
    const std::vector<double> y_nodes = quadrature_nodes(disc.basis);

    const KernelParams p1{spec.alpha1, spec.a, reg.k, reg.beta};
    const KernelParams p2{spec.alpha2, spec.a, reg.k, reg.beta};

    // Data terms and integral kernels depend only on the grid; fill them once.
    // kernel[i][n][d] is (1/s)(Psi(r_d) - e^{-s r_d}/2) at offset r_d = d*h.
    std::vector<SpectralField> u_data(static_cast<size_t>(m), SpectralField::zero(n_modes));
    std::vector<SpectralField> v_data(static_cast<size_t>(m), SpectralField::zero(n_modes));
    std::vector<std::vector<double>> kernel_u(static_cast<size_t>(n_modes));
    std::vector<std::vector<double>> kernel_v(static_cast<size_t>(n_modes));
    for (int n = 1; n <= n_modes; ++n) {
        const size_t ns = static_cast<size_t>(n - 1);
        const double lambda = eigenvalue(n, disc.basis);
        const double s1 = std::sqrt(spec.alpha1 * lambda);
        const double s2 = std::sqrt(spec.alpha2 * lambda);
        kernel_u[ns].resize(static_cast<size_t>(m));
        kernel_v[ns].resize(static_cast<size_t>(m));
        for (int d = 0; d < m; ++d) {
            const double r = nodes[static_cast<size_t>(d)];
            kernel_u[ns][static_cast<size_t>(d)] =
                (filter_value(p1, lambda, r) - 0.5 * std::exp(-s1 * r)) / s1;
            kernel_v[ns][static_cast<size_t>(d)] =
                (filter_value(p2, lambda, r) - 0.5 * std::exp(-s2 * r)) / s2;
        }
        for (int j = 0; j < m; ++j) {
            const size_t js = static_cast<size_t>(j);
            const double x = nodes[js];
            const double psi1 = filter_value(p1, lambda, x);
            const double psi2 = filter_value(p2, lambda, x);
            const double e1 = std::exp(-s1 * x);
            const double e2 = std::exp(-s2 * x);
            u_data[js].coeffs[ns] = (psi1 + 0.5 * e1) * data.u0.coeffs[ns] +
                                    (psi1 - 0.5 * e1) / s1 * data.u1.coeffs[ns];
            v_data[js].coeffs[ns] = (psi2 + 0.5 * e2) * data.v0.coeffs[ns] +
                                    (psi2 - 0.5 * e2) / s2 * data.v1.coeffs[ns];
        }
    }

    // One application of the fixed-point map.
    auto apply_map = [&](const std::vector<SpectralField>& u_cur,
                         const std::vector<SpectralField>& v_cur,
                         std::vector<SpectralField>& u_next,
                         std::vector<SpectralField>& v_next) {
        const ForcingProjection rhs = project_nonlinearity(spec, disc, u_cur, v_cur, y_nodes);
        for (int j = 0; j < m; ++j) {
            const size_t js = static_cast<size_t>(j);
            for (int n = 0; n < n_modes; ++n) {
                const size_t ns = static_cast<size_t>(n);
                double acc_u = 0.0;
                double acc_v = 0.0;
                for (int l = 0; j > 0 && l <= j; ++l) {
                    const size_t ls = static_cast<size_t>(l);
                    const double w = (l == 0 || l == j) ? 0.5 * h : h;
                    const size_t d = static_cast<size_t>(j - l);
                    acc_u += w * kernel_u[ns][d] * rhs.f1[ls][ns];
                    acc_v += w * kernel_v[ns][d] * rhs.f2[ls][ns];
                }
                u_next[js].coeffs[ns] = u_data[js].coeffs[ns] + acc_u;
                v_next[js].coeffs[ns] = v_data[js].coeffs[ns] + acc_v;
            }
        }
    };

    SolveResult result;
    result.trajectory.x_nodes = nodes;
    std::vector<SpectralField> u_cur = u_data;
    std::vector<SpectralField> v_cur = v_data;
    std::vector<SpectralField> u_next(static_cast<size_t>(m), SpectralField::zero(n_modes));
    std::vector<SpectralField> v_next(static_cast<size_t>(m), SpectralField::zero(n_modes));

    SolveDiagnostics& diag = result.diagnostics;
    bool iterates_finite = true;
    for (int iter = 1; iter <= disc.picard_max_iters; ++iter) {
        apply_map(u_cur, v_cur, u_next, v_next);
        const double diff = pair_distance(u_next, v_next, u_cur, v_cur);
        diag.successive_diffs.push_back(diff);
        diag.iterations = iter;
        u_cur.swap(u_next);
        v_cur.swap(v_next);
        if (diff <= disc.picard_tol) {
            diag.converged = true;
            break;
        }
        if (!std::isfinite(diff)) {
            // iterates left double range; further sweeps cannot recover
            iterates_finite = false;
            break;
        }
    }

    if (iterates_finite) {
        apply_map(u_cur, v_cur, u_next, v_next);
        diag.residual = pair_distance(u_next, v_next, u_cur, v_cur);
    } else {
        diag.residual = std::numeric_limits<double>::infinity();
    }

    result.trajectory.u = std::move(u_cur);
    result.trajectory.v = std::move(v_cur);
    return result;
}

ExactMildResult evaluate_exact_mild(const ProblemSpec& spec, const CauchyData& data,
                                    const Trajectory& known, const Discretization& disc) {
    require_solver_inputs(spec, data, disc);
    if (static_cast<int>(known.u.size()) != disc.n_x ||
        static_cast<int>(known.v.size()) != disc.n_x) {
        throw GridMismatchError("solver: known trajectory does not match n_x");
    }

    const int m = disc.n_x;
    const int n_modes = disc.basis.n_modes;
    const double h = spec.a / static_cast<double>(m - 1);
    const std::vector<double> nodes = x_grid(spec.a, m);
    const std::vector<double> y_nodes = quadrature_nodes(disc.basis);
    const ForcingProjection rhs = project_nonlinearity(spec, disc, known.u, known.v, y_nodes);

    ExactMildResult result;
    result.trajectory.x_nodes = nodes;
    result.trajectory.u.assign(static_cast<size_t>(m), SpectralField::zero(n_modes));
    result.trajectory.v.assign(static_cast<size_t>(m), SpectralField::zero(n_modes));

    constexpr long double kMax = std::numeric_limits<double>::max();
    for (int n = 1; n <= n_modes; ++n) {
        const size_t ns = static_cast<size_t>(n - 1);
        const double lambda = eigenvalue(n, disc.basis);
        for (int j = 0; j < m; ++j) {
            const size_t js = static_cast<size_t>(j);
            for (int component = 1; component <= 2; ++component) {
                const double alpha = (component == 1) ? spec.alpha1 : spec.alpha2;
                const double c0 = (component == 1) ? data.u0.coeffs[ns] : data.v0.coeffs[ns];
                const double c1 = (component == 1) ? data.u1.coeffs[ns] : data.v1.coeffs[ns];
                const auto& fhat = (component == 1) ? rhs.f1 : rhs.f2;

                const detail::PropagatorL prop =
                    detail::propagator_l(alpha, lambda, nodes[js]);
                long double acc = prop.cosh_sx * static_cast<long double>(c0) +
                                  prop.sinh_sx_over_s * static_cast<long double>(c1);
                for (int l = 0; j > 0 && l <= j; ++l) {
                    const double w = (l == 0 || l == j) ? 0.5 * h : h;
                    const detail::PropagatorL kern =
                        detail::propagator_l(alpha, lambda, nodes[js] - nodes[static_cast<size_t>(l)]);
                    acc += static_cast<long double>(w) * kern.sinh_sx_over_s *
                           static_cast<long double>(fhat[static_cast<size_t>(l)][ns]);
                }

                double value;
                if (std::isfinite(static_cast<double>(acc)) && std::fabs(acc) <= kMax) {
                    value = static_cast<double>(acc);
                } else {
                    value = std::signbit(static_cast<double>(acc))
                                ? -std::numeric_limits<double>::infinity()
                                : std::numeric_limits<double>::infinity();
                    result.saturation.push_back(SaturationEvent{j, n, component});
                }
                if (component == 1) {
                    result.trajectory.u[js].coeffs[ns] = value;
                } else {
                    result.trajectory.v[js].coeffs[ns] = value;
                }
            }
        }
    }
    return result;
}

namespace {

struct ModeTerm {
    int mode = 1;
    double amplitude = 0.0;
    enum class Profile { Exp, Poly } kind = Profile::Exp;
    double rate = 0.0;                       // Exp: p(x) = e^{rate x}
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;     // Poly: p(x) = c0 + c1 x + c2 x^2

    double value(double x) const {
        return kind == Profile::Exp ? std::exp(rate * x) : c0 + c1 * x + c2 * x * x;
    }
    double deriv(double x) const {
        return kind == Profile::Exp ? rate * std::exp(rate * x) : c1 + 2.0 * c2 * x;
    }
    double second(double x) const {
        return kind == Profile::Exp ? rate * rate * std::exp(rate * x) : 2.0 * c2;
    }
};

struct Ansatz {
    std::vector<ModeTerm> u;
    std::vector<ModeTerm> v;
};

ModeTerm exp_term(int mode, double amplitude, double rate) {
    ModeTerm t;
    t.mode = mode;
    t.amplitude = amplitude;
    t.kind = ModeTerm::Profile::Exp;
    t.rate = rate;
    return t;
}

ModeTerm poly_term(int mode, double amplitude, double c0, double c1, double c2) {
    ModeTerm t;
    t.mode = mode;
    t.amplitude = amplitude;
    t.kind = ModeTerm::Profile::Poly;
    t.c0 = c0;
    t.c1 = c1;
    t.c2 = c2;
    return t;
}

Ansatz build_ansatz(const std::string& recipe, const ProblemSpec& constants,
                    const BasisConfig& basis) {
    Ansatz out;
    if (recipe == "zero") {
        // u* = v* = 0: zero forcing and zero data
    } else if (recipe == "single_mode_decay") {
        out.u = {exp_term(1, 1.0, -1.0)};
    } else if (recipe == "two_mode_decay") {
        out.u = {exp_term(1, 1.0, -1.0), exp_term(2, 0.1, -2.0)};
        out.v = {exp_term(1, 0.75, -1.5), exp_term(3, 0.05, -1.0)};
    } else if (recipe == "decaying_mode") {
        // Profile rate matched to the first eigenvalue so the forcing vanishes
        // when gamma = sigma = 0 and the data terms cancel algebraically.
        const double s1 = std::sqrt(constants.alpha1 * eigenvalue(1, basis));
        out.u = {exp_term(1, 1.0, -s1)};
    } else if (recipe == "poly_profile") {
        out.u = {poly_term(1, 1.0, 1.0, 0.5, -0.25)};
        out.v = {poly_term(2, 0.5, 1.0, -1.0, 1.0 / 3.0)};
    } else if (recipe == "growing_mode") {
        out.u = {exp_term(1, 1.0, 1.0)};
        out.v = {exp_term(2, 0.3, 0.5)};
    } else {
        throw ConfigError("solver: unknown manufactured recipe '" + recipe + "'");
    }
    return out;
}

}  // namespace

std::vector<std::string> manufactured_recipes() {
    return {"zero", "single_mode_decay", "two_mode_decay", "decaying_mode", "poly_profile",
            "growing_mode"};
}

Manufactured manufactured_problem(const std::string& recipe, const ProblemSpec& constants,
                                  const Discretization& disc) {
    constants.validate();
    disc.validate();
    const Ansatz ansatz = build_ansatz(recipe, constants, disc.basis);
    const int n_modes = disc.basis.n_modes;
    for (const std::vector<ModeTerm>* terms : {&ansatz.u, &ansatz.v}) {
        for (const ModeTerm& t : *terms) {
            if (t.mode < 1 || t.mode > n_modes) {
                throw ConfigError("solver: recipe mode " + std::to_string(t.mode) +
                                  " outside the basis truncation N=" + std::to_string(n_modes));
            }
        }
    }

    const int m = disc.n_x;
    const std::vector<double> nodes = x_grid(constants.a, m);
    const std::vector<double> y_nodes = quadrature_nodes(disc.basis);
    const double mode_scale = std::sqrt(constants.b / 2.0);  // <cos(n pi y/b), phi_n>

    Manufactured out;
    out.spec = constants;
    out.spec.f1.assign(static_cast<size_t>(m), SpectralField::zero(n_modes));
    out.spec.f2.assign(static_cast<size_t>(m), SpectralField::zero(n_modes));
    out.truth.x_nodes = nodes;
    out.truth.u.assign(static_cast<size_t>(m), SpectralField::zero(n_modes));
    out.truth.v.assign(static_cast<size_t>(m), SpectralField::zero(n_modes));

    const size_t q = y_nodes.size();
    std::vector<double> u_vals(q), v_vals(q), uxx(q), vxx(q), uyy(q), vyy(q), f_grid(q);

    for (int j = 0; j < m; ++j) {
        const size_t js = static_cast<size_t>(j);
        const double x = nodes[js];
        std::fill(u_vals.begin(), u_vals.end(), 0.0);
        std::fill(v_vals.begin(), v_vals.end(), 0.0);
        std::fill(uxx.begin(), uxx.end(), 0.0);
        std::fill(vxx.begin(), vxx.end(), 0.0);
        std::fill(uyy.begin(), uyy.end(), 0.0);
        std::fill(vyy.begin(), vyy.end(), 0.0);

        for (int component = 0; component < 2; ++component) {
            const std::vector<ModeTerm>& terms = (component == 0) ? ansatz.u : ansatz.v;
            std::vector<double>& vals = (component == 0) ? u_vals : v_vals;
            std::vector<double>& d2x = (component == 0) ? uxx : vxx;
            std::vector<double>& d2y = (component == 0) ? uyy : vyy;
            std::vector<SpectralField>& truth =
                (component == 0) ? out.truth.u : out.truth.v;
            for (const ModeTerm& t : terms) {
                const double lambda = eigenvalue(t.mode, disc.basis);
                const double freq = std::sqrt(lambda);
                const double p = t.value(x);
                const double p2 = t.second(x);
                truth[js].coeffs[static_cast<size_t>(t.mode - 1)] += t.amplitude * mode_scale * p;
                for (size_t i = 0; i < q; ++i) {
                    const double c = t.amplitude * std::cos(freq * y_nodes[i]);
                    vals[i] += c * p;
                    d2x[i] += c * p2;
                    d2y[i] += -lambda * c * p;
                }
            }
        }

        for (int which = 1; which <= 2; ++which) {
            const int row = which - 1;
            const double alpha = (which == 1) ? constants.alpha1 : constants.alpha2;
            const double gamma = (which == 1) ? constants.gamma1 : constants.gamma2;
            const std::vector<double>& d2x = (which == 1) ? uxx : vxx;
            const std::vector<double>& d2y = (which == 1) ? uyy : vyy;
            for (size_t i = 0; i < q; ++i) {
                f_grid[i] = d2x[i] + alpha * d2y[i] +
                            gamma * std::sin(constants.delta[row][0] * u_vals[i] +
                                             constants.delta[row][1] * v_vals[i]) +
                            constants.sigma[row][0] * u_vals[i] +
                            constants.sigma[row][1] * v_vals[i];
            }
            GridFunction g;
            g.nodes = y_nodes;
            g.values = f_grid;
            ((which == 1) ? out.spec.f1 : out.spec.f2)[js] = analyze(g, disc.basis);
        }
    }

    out.data.u0 = SpectralField::zero(n_modes);
    out.data.u1 = SpectralField::zero(n_modes);
    out.data.v0 = SpectralField::zero(n_modes);
    out.data.v1 = SpectralField::zero(n_modes);
    for (int component = 0; component < 2; ++component) {
        const std::vector<ModeTerm>& terms = (component == 0) ? ansatz.u : ansatz.v;
        SpectralField& value0 = (component == 0) ? out.data.u0 : out.data.v0;
        SpectralField& slope0 = (component == 0) ? out.data.u1 : out.data.v1;
        for (const ModeTerm& t : terms) {
            const size_t ns = static_cast<size_t>(t.mode - 1);
            value0.coeffs[ns] += t.amplitude * mode_scale * t.value(0.0);
            slope0.coeffs[ns] += t.amplitude * mode_scale * t.deriv(0.0);
        }
    }
    return out;
}

std::vector<double> trajectory_error(const Trajectory& approx, const Trajectory& exact) {
    if (approx.x_nodes.size() != exact.x_nodes.size() || approx.u.size() != exact.u.size() ||
        approx.v.size() != exact.v.size()) {
        throw GridMismatchError("solver: trajectories differ in grid size");
    }
    for (size_t j = 0; j < approx.x_nodes.size(); ++j) {
        if (approx.x_nodes[j] != exact.x_nodes[j]) {
            throw GridMismatchError("solver: trajectories are on different x-grids");
        }
    }
    std::vector<double> errors(approx.x_nodes.size(), 0.0);
    for (size_t j = 0; j < approx.x_nodes.size(); ++j) {
        if (approx.u[j].coeffs.size() != exact.u[j].coeffs.size() ||
            approx.v[j].coeffs.size() != exact.v[j].coeffs.size()) {
            throw GridMismatchError("solver: trajectories differ in mode count at node " +
                                    std::to_string(j));
        }
        double acc = 0.0;
        for (size_t n = 0; n < approx.u[j].coeffs.size(); ++n) {
            const double du = approx.u[j].coeffs[n] - exact.u[j].coeffs[n];
            const double dv = approx.v[j].coeffs[n] - exact.v[j].coeffs[n];
            acc += du * du + dv * dv;
        }
        errors[j] = std::sqrt(acc);
    }
    return errors;
}

}  // namespace sgreg
