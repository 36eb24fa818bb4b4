#pragma once

#include <span>
#include <vector>

namespace sgreg {

/// Cosine eigenbasis of -d^2/dy^2 with zero Neumann data on (0, b).
///
/// The basis is phi_n(y) = sqrt(2/b) cos(n pi y / b) with eigenvalue
/// lambda_n = (n pi / b)^2 for n >= 1. The constant (zero-eigenvalue) mode is
/// excluded by convention; inputs are taken as mean-zero projected.
struct BasisConfig {
    double b = 3.14159265358979323846;  ///< y-domain length
    int n_modes = 32;                   ///< truncation level N
    int n_quad = 128;                   ///< y-quadrature points Q (>= 4N)

    /// Throws std::invalid_argument when b <= 0, N < 1 or Q < 4N.
    void validate() const;

    bool operator==(const BasisConfig&) const = default;
};

/// A y-dependent function held as its first N cosine-basis coefficients.
/// coeffs[i] = <u, phi_{i+1}>. By Parseval the L2 norm of the represented
/// function equals the Euclidean norm of coeffs.
struct SpectralField {
    std::vector<double> coeffs;

    static SpectralField zero(int n_modes) {
        return SpectralField{std::vector<double>(static_cast<size_t>(n_modes), 0.0)};
    }
    int n_modes() const { return static_cast<int>(coeffs.size()); }

    bool operator==(const SpectralField&) const = default;
};

/// Point samples of a function of y on an increasing node set within [0, b].
struct GridFunction {
    std::vector<double> values;
    std::vector<double> nodes;
};

/// lambda_n = (n pi / b)^2. Throws std::invalid_argument for n < 1.
double eigenvalue(int n, const BasisConfig& cfg);

/// phi_n(y) = sqrt(2/b) cos(n pi y / b). Throws std::domain_error for y outside [0, b].
double eigenfunction_at(int n, double y, const BasisConfig& cfg);

/// Q uniform nodes on [0, b] including both endpoints.
std::vector<double> quadrature_nodes(const BasisConfig& cfg);

/// Composite trapezoid weights matching quadrature_nodes.
std::vector<double> quadrature_weights(const BasisConfig& cfg);

/// Projects grid samples onto the first N modes via trapezoid quadrature.
/// g must be sampled on quadrature_nodes(cfg); otherwise GridMismatchError.
/// Exact to rounding for band-limited inputs (modes <= N) when Q >= 4N.
SpectralField analyze(const GridFunction& g, const BasisConfig& cfg);

/// Pointwise sum of coeffs[n] * phi_{n+1}(y) over the given nodes.
GridFunction synthesize(const SpectralField& f, std::span<const double> nodes,
                        const BasisConfig& cfg);

/// Euclidean norm of the coefficient vector (equals the L2 norm by Parseval).
double l2_norm(const SpectralField& f);

/// Trapezoid approximation of the integral of g over [0, b]; test and
/// diagnostic helper for Parseval-style checks.
double quadrature_integral(const GridFunction& g, const BasisConfig& cfg);

}  // namespace sgreg
