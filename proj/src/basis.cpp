#include "sgreg/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sgreg/errors.hpp"

namespace sgreg {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void BasisConfig::validate() const {
    if (!(b > 0.0)) {
        throw std::invalid_argument("basis: domain length b must be positive, got " +
                                    std::to_string(b));
    }
    if (n_modes < 1) {
        throw std::invalid_argument("basis: n_modes must be >= 1, got " +
                                    std::to_string(n_modes));
    }
    if (n_quad < 4 * n_modes) {
        throw std::invalid_argument("basis: n_quad must be >= 4*n_modes (anti-aliasing floor), got Q=" +
                                    std::to_string(n_quad) + " for N=" + std::to_string(n_modes));
    }
}

double eigenvalue(int n, const BasisConfig& cfg) {
    if (n < 1) {
        throw std::invalid_argument("basis: eigenvalue index must be >= 1, got " +
                                    std::to_string(n));
    }
    const double w = static_cast<double>(n) * kPi / cfg.b;
    return w * w;
}

double eigenfunction_at(int n, double y, const BasisConfig& cfg) {
    if (n < 1) {
        throw std::invalid_argument("basis: eigenfunction index must be >= 1, got " +
                                    std::to_string(n));
    }
    if (y < 0.0 || y > cfg.b) {
        throw std::domain_error("basis: y=" + std::to_string(y) + " outside [0, " +
                                std::to_string(cfg.b) + "]");
    }
    return std::sqrt(2.0 / cfg.b) * std::cos(static_cast<double>(n) * kPi * y / cfg.b);
}

std::vector<double> quadrature_nodes(const BasisConfig& cfg) {
    cfg.validate();
    std::vector<double> nodes(static_cast<size_t>(cfg.n_quad));
    const double h = cfg.b / static_cast<double>(cfg.n_quad - 1);
    for (int q = 0; q < cfg.n_quad; ++q) {
        nodes[static_cast<size_t>(q)] = static_cast<double>(q) * h;
    }
    nodes.back() = cfg.b;
    return nodes;
}

std::vector<double> quadrature_weights(const BasisConfig& cfg) {
    cfg.validate();
    const double h = cfg.b / static_cast<double>(cfg.n_quad - 1);
    std::vector<double> w(static_cast<size_t>(cfg.n_quad), h);
    w.front() = 0.5 * h;
    w.back() = 0.5 * h;
    return w;
}

namespace {

void require_quadrature_grid(const GridFunction& g, const BasisConfig& cfg) {
    if (g.values.size() != g.nodes.size()) {
        throw GridMismatchError("basis: grid function has " + std::to_string(g.values.size()) +
                                " values but " + std::to_string(g.nodes.size()) + " nodes");
    }
    if (static_cast<int>(g.nodes.size()) != cfg.n_quad) {
        throw GridMismatchError("basis: expected " + std::to_string(cfg.n_quad) +
                                " quadrature nodes, got " + std::to_string(g.nodes.size()));
    }
    const double h = cfg.b / static_cast<double>(cfg.n_quad - 1);
    const double tol = 1e-12 * cfg.b;
    for (int q = 0; q < cfg.n_quad; ++q) {
        const double expected = (q == cfg.n_quad - 1) ? cfg.b : static_cast<double>(q) * h;
        if (std::abs(g.nodes[static_cast<size_t>(q)] - expected) > tol) {
            throw GridMismatchError("basis: node " + std::to_string(q) +
                                    " does not lie on the quadrature grid");
        }
    }
}

}  // namespace

SpectralField analyze(const GridFunction& g, const BasisConfig& cfg) {
    cfg.validate();
    require_quadrature_grid(g, cfg);
    const std::vector<double> w = quadrature_weights(cfg);
    SpectralField f = SpectralField::zero(cfg.n_modes);
    const double scale = std::sqrt(2.0 / cfg.b);
    for (int n = 1; n <= cfg.n_modes; ++n) {
        const double freq = static_cast<double>(n) * kPi / cfg.b;
        double acc = 0.0;
        for (int q = 0; q < cfg.n_quad; ++q) {
            const size_t i = static_cast<size_t>(q);
            acc += w[i] * g.values[i] * scale * std::cos(freq * g.nodes[i]);
        }
        f.coeffs[static_cast<size_t>(n - 1)] = acc;
    }
    return f;
}

GridFunction synthesize(const SpectralField& f, std::span<const double> nodes,
                        const BasisConfig& cfg) {
    if (!(cfg.b > 0.0)) {
        throw std::invalid_argument("basis: domain length b must be positive");
    }
    for (double y : nodes) {
        if (y < 0.0 || y > cfg.b) {
            throw std::domain_error("basis: synthesis node " + std::to_string(y) +
                                    " outside [0, " + std::to_string(cfg.b) + "]");
        }
    }
    GridFunction g;
    g.nodes.assign(nodes.begin(), nodes.end());
    g.values.assign(nodes.size(), 0.0);
    const double scale = std::sqrt(2.0 / cfg.b);
    const int n_modes = f.n_modes();
    for (int n = 1; n <= n_modes; ++n) {
        const double c = f.coeffs[static_cast<size_t>(n - 1)];
        if (c == 0.0) {
            continue;
        }
        const double freq = static_cast<double>(n) * kPi / cfg.b;
        for (size_t i = 0; i < g.nodes.size(); ++i) {
            g.values[i] += c * scale * std::cos(freq * g.nodes[i]);
        }
    }
    return g;
}

double l2_norm(const SpectralField& f) {
    double acc = 0.0;
    for (double c : f.coeffs) {
        acc += c * c;
    }
    return std::sqrt(acc);
}

double quadrature_integral(const GridFunction& g, const BasisConfig& cfg) {
    require_quadrature_grid(g, cfg);
    const std::vector<double> w = quadrature_weights(cfg);
    double acc = 0.0;
    for (size_t i = 0; i < g.values.size(); ++i) {
        acc += w[i] * g.values[i];
    }
    return acc;
}

}  // namespace sgreg
