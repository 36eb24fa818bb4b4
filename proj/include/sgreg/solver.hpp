#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgreg/basis.hpp"
#include "sgreg/problem.hpp"

namespace sgreg {

/// Spatial and iteration controls shared by the solvers.
struct Discretization {
    BasisConfig basis;
    int n_x = 101;                 ///< uniform x-nodes on [0, a] inclusive, >= 2
    double picard_tol = 1e-10;     ///< sup-x coefficient-L2 convergence metric
    int picard_max_iters = 200;

    void validate() const;

    bool operator==(const Discretization&) const = default;
};

/// Noise level, exponent and kernel order driving the regularization strength.
struct RegularizationConfig {
    double epsilon = 1e-2;  ///< noise level, > 0
    double m = 1.0;         ///< exponent in (0, 1]
    double k = 1.0;         ///< kernel order, >= 1
    double beta = 1e-2;     ///< damping strength, epsilon^m unless overridden

    /// beta derived as epsilon^m.
    static RegularizationConfig from_noise(double epsilon, double m, double k);

    void validate() const;

    bool operator==(const RegularizationConfig&) const = default;
};

/// A pair of coefficient sequences over a uniform x-grid on [0, a].
struct Trajectory {
    std::vector<double> x_nodes;
    std::vector<SpectralField> u;
    std::vector<SpectralField> v;
};

/// Per-solve convergence record; successive_diffs[i] is the sup-over-x L2
/// distance between Picard iterates i and i+1.
struct SolveDiagnostics {
    int iterations = 0;
    std::vector<double> successive_diffs;
    bool converged = false;
    double residual = 0.0;  ///< integral-equation residual of the final iterate
};

struct SolveResult {
    Trajectory trajectory;
    SolveDiagnostics diagnostics;
};

/// A coefficient of the exact mild evaluator that left double range.
struct SaturationEvent {
    int x_index = 0;
    int mode = 0;       ///< 1-based mode index
    int component = 0;  ///< 1 for u, 2 for v
};

struct ExactMildResult {
    Trajectory trajectory;
    std::vector<SaturationEvent> saturation;

    bool saturated() const { return !saturation.empty(); }
};

/// Manufactured ground truth: a problem whose forcing was computed by
/// substituting a chosen analytic pair (u*, v*) into the system.
struct Manufactured {
    ProblemSpec spec;
    CauchyData data;
    Trajectory truth;
};

/// Uniform grid of n_x nodes on [0, a] including both endpoints.
std::vector<double> x_grid(double a, int n_x);

/// Picard fixed point of the filtered integral equations: per mode n and
/// node x_j,
///   u_n(x_j) = (Psi + E/2) u0_n + (1/s)(Psi - E/2) u1_n
///              + int_0^{x_j} (1/s)(Psi_shift - E_shift/2) <F1, phi_n> dxi
/// with E = e^{-s x_j}, the xi-integral by composite trapezoid over nodes
/// <= x_j, and the v-analogue. Non-convergence returns the last iterate with
/// converged = false; a violated filter hypothesis a^k > k*beta throws
/// ConfigError.
SolveResult solve_regularized(const ProblemSpec& spec, const CauchyData& data,
                              const RegularizationConfig& reg, const Discretization& disc);

/// Evaluates the unregularized cosh/sinh mild formulas with (u, v) inside
/// F1, F2 supplied by `known` (an evaluator, not a fixed point). For noisy
/// data this amplifies coefficient errors by about cosh(sqrt(alpha lambda_n) a);
/// coefficients leaving double range are flagged per mode and stored as
/// signed infinities.
ExactMildResult evaluate_exact_mild(const ProblemSpec& spec, const CauchyData& data,
                                    const Trajectory& known, const Discretization& disc);

/// Built-in manufactured ansatz names accepted by manufactured_problem.
std::vector<std::string> manufactured_recipes();

/// Builds the forcing, exact Cauchy data and exact trajectory for the named
/// ansatz (finite cosine modes in y times exponential or polynomial profiles
/// in x). Forcing in `constants` is ignored and replaced. Unknown recipe
/// names throw ConfigError.
Manufactured manufactured_problem(const std::string& recipe, const ProblemSpec& constants,
                                  const Discretization& disc);

/// Per x-node error sqrt(|u_a - u_e|^2 + |v_a - v_e|^2) in coefficient norm.
std::vector<double> trajectory_error(const Trajectory& approx, const Trajectory& exact);

}  // namespace sgreg
