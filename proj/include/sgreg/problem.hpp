#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sgreg/basis.hpp"

namespace sgreg {

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Constants and forcing data of the coupled system
///   u_xx + alpha1 u_yy + gamma1 sin(delta11 u + delta12 v) + sigma11 u + sigma12 v = f1
///   v_xx + alpha2 v_yy + gamma2 sin(delta21 u + delta22 v) + sigma21 u + sigma22 v = f2
/// on (0, a) x (0, b). Forcings are stored pre-projected on the solver x-grid,
/// one SpectralField per x-node; interpolation between nodes is not provided.
struct ProblemSpec {
    double a = 1.0;
    double b = 3.14159265358979323846;
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    Matrix2 delta{{{0.0, 0.0}, {0.0, 0.0}}};
    Matrix2 sigma{{{0.0, 0.0}, {0.0, 0.0}}};
    std::vector<SpectralField> f1;
    std::vector<SpectralField> f2;

    /// Throws std::invalid_argument on non-positive extents or diffusivities.
    void validate() const;

    bool operator==(const ProblemSpec&) const = default;
};

/// Values and x-derivatives of (u, v) on the data line x = 0.
struct CauchyData {
    SpectralField u0;
    SpectralField u1;
    SpectralField v0;
    SpectralField v1;

    /// Throws std::invalid_argument unless all four fields share one length.
    void validate() const;

    bool operator==(const CauchyData&) const = default;
};

/// A measurement of Cauchy data carrying coefficient noise of Euclidean norm
/// exactly epsilon in each of the four fields.
struct NoisySample {
    CauchyData data;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
};

/// Order s and index nu of the Gevrey smoothness scale.
struct GevreyParams {
    double s = 0.0;
    double nu = 0.0;  // nu = 0 accepted as the L2 degeneracy
};

/// Right-hand side F_i(u, v) = f_i - gamma_i sin(delta_i1 u + delta_i2 v)
///                           - sigma_i1 u - sigma_i2 v
/// evaluated pointwise on the shared node set of u and v; the stored forcing
/// is synthesized to those nodes first. which selects the equation (1 or 2).
GridFunction nonlinearity(int which, const ProblemSpec& spec, int x_index,
                          const GridFunction& u, const GridFunction& v);

/// Row-wise and total Lipschitz constants of the coupled nonlinearity.
struct LipschitzConstants {
    double c1 = 0.0;     ///< (|g1||d11|+|s11|)^2 + (|g1||d12|+|s12|)^2
    double c2 = 0.0;     ///< second-row analogue
    double total = 0.0;  ///< sum over all four (i, j) terms
};

LipschitzConstants lipschitz_constants(const ProblemSpec& spec);

/// sqrt( sum_n lambda_n^s e^{2 nu lambda_n} |coeffs[n]|^2 ). Returns +infinity
/// when a nonzero coefficient sits where the weight exceeds double range.
double gevrey_norm(const SpectralField& f, const GevreyParams& p, const BasisConfig& cfg);

/// Adds an independent pseudo-random coefficient perturbation of Euclidean
/// norm exactly epsilon to each of the four data fields. Deterministic for a
/// given seed.
NoisySample make_noisy(const CauchyData& data, double epsilon, std::uint64_t seed);

}  // namespace sgreg
