#include "sgreg/problem.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "sgreg/errors.hpp"

namespace sgreg {

void ProblemSpec::validate() const {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("problem: domain extents a, b must be positive");
    }
    if (!(alpha1 > 0.0) || !(alpha2 > 0.0)) {
        throw std::invalid_argument("problem: diffusivities alpha1, alpha2 must be positive");
    }
}

void CauchyData::validate() const {
    const size_t n = u0.coeffs.size();
    if (u1.coeffs.size() != n || v0.coeffs.size() != n || v1.coeffs.size() != n) {
        throw std::invalid_argument("problem: Cauchy data fields must share one basis length");
    }
    if (n == 0) {
        throw std::invalid_argument("problem: Cauchy data fields are empty");
    }
}

GridFunction nonlinearity(int which, const ProblemSpec& spec, int x_index,
                          const GridFunction& u, const GridFunction& v) {
    if (which != 1 && which != 2) {
        throw std::invalid_argument("problem: nonlinearity selector must be 1 or 2, got " +
                                    std::to_string(which));
    }
    if (u.nodes.size() != v.nodes.size() || u.values.size() != v.values.size() ||
        u.values.size() != u.nodes.size()) {
        throw GridMismatchError("problem: u and v grids differ in size");
    }
    for (size_t i = 0; i < u.nodes.size(); ++i) {
        if (u.nodes[i] != v.nodes[i]) {
            throw GridMismatchError("problem: u and v are sampled on different nodes");
        }
    }
    const std::vector<SpectralField>& forcing = (which == 1) ? spec.f1 : spec.f2;
    if (x_index < 0 || static_cast<size_t>(x_index) >= forcing.size()) {
        throw std::invalid_argument("problem: x_index " + std::to_string(x_index) +
                                    " outside the forcing grid of " +
                                    std::to_string(forcing.size()) + " nodes");
    }
    const int row = which - 1;
    const double gamma = (which == 1) ? spec.gamma1 : spec.gamma2;
    const double d1 = spec.delta[row][0];
    const double d2 = spec.delta[row][1];
    const double s1 = spec.sigma[row][0];
    const double s2 = spec.sigma[row][1];

    BasisConfig forcing_basis;
    forcing_basis.b = spec.b;
    forcing_basis.n_modes = forcing[static_cast<size_t>(x_index)].n_modes();
    GridFunction f = synthesize(forcing[static_cast<size_t>(x_index)], u.nodes, forcing_basis);

    GridFunction out;
    out.nodes = u.nodes;
    out.values.resize(u.values.size());
    for (size_t i = 0; i < u.values.size(); ++i) {
        const double ui = u.values[i];
        const double vi = v.values[i];
        out.values[i] = f.values[i] - gamma * std::sin(d1 * ui + d2 * vi) - s1 * ui - s2 * vi;
    }
    return out;
}

LipschitzConstants lipschitz_constants(const ProblemSpec& spec) {
    auto term = [](double gamma, double delta, double sigma) {
        const double t = std::abs(gamma) * std::abs(delta) + std::abs(sigma);
        return t * t;
    };
    LipschitzConstants out;
    out.c1 = term(spec.gamma1, spec.delta[0][0], spec.sigma[0][0]) +
             term(spec.gamma1, spec.delta[0][1], spec.sigma[0][1]);
    out.c2 = term(spec.gamma2, spec.delta[1][0], spec.sigma[1][0]) +
             term(spec.gamma2, spec.delta[1][1], spec.sigma[1][1]);
    out.total = out.c1 + out.c2;
    return out;
}

double gevrey_norm(const SpectralField& f, const GevreyParams& p, const BasisConfig& cfg) {
    if (!(p.nu >= 0.0)) {
        throw std::invalid_argument("problem: Gevrey index nu must be >= 0");
    }
    double acc = 0.0;
    for (int n = 1; n <= f.n_modes(); ++n) {
        const double c = f.coeffs[static_cast<size_t>(n - 1)];
        if (c == 0.0) {
            continue;  // weight may overflow where the coefficient vanishes
        }
        const double lambda = eigenvalue(n, cfg);
        const double weight = std::pow(lambda, p.s) * std::exp(2.0 * p.nu * lambda);
        acc += weight * c * c;
        if (!std::isfinite(acc)) {
            return std::numeric_limits<double>::infinity();
        }
    }
    return std::sqrt(acc);
}

namespace {

void add_calibrated_noise(SpectralField& field, double epsilon, std::mt19937_64& engine) {
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> bump(field.coeffs.size());
    double norm_sq = 0.0;
    for (double& entry : bump) {
        entry = dist(engine);
        norm_sq += entry * entry;
    }
    if (norm_sq == 0.0) {
        bump[0] = 1.0;
        norm_sq = 1.0;
    }
    const double scale = epsilon / std::sqrt(norm_sq);
    for (size_t i = 0; i < bump.size(); ++i) {
        field.coeffs[i] += scale * bump[i];
    }
}

}  // namespace

NoisySample make_noisy(const CauchyData& data, double epsilon, std::uint64_t seed) {
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("problem: noise level epsilon must be positive, got " +
                                    std::to_string(epsilon));
    }
    data.validate();
    NoisySample sample;
    sample.data = data;
    sample.epsilon = epsilon;
    sample.seed = seed;

    std::mt19937_64 engine(seed);
    add_calibrated_noise(sample.data.u0, epsilon, engine);
    add_calibrated_noise(sample.data.v0, epsilon, engine);
    add_calibrated_noise(sample.data.u1, epsilon, engine);
    add_calibrated_noise(sample.data.v1, epsilon, engine);
    return sample;
}

}  // namespace sgreg
