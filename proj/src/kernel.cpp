#include "sgreg/kernel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sgreg/errors.hpp"

namespace sgreg {

void KernelParams::validate() const {
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("kernel: alpha must be positive, got " + std::to_string(alpha));
    }
    if (!(a > 0.0)) {
        throw std::invalid_argument("kernel: a must be positive, got " + std::to_string(a));
    }
    if (!(k >= 1.0)) {
        throw std::invalid_argument("kernel: order k must be >= 1, got " + std::to_string(k));
    }
    if (!(beta >= 0.0)) {
        throw std::invalid_argument("kernel: beta must be >= 0, got " + std::to_string(beta));
    }
}

bool KernelParams::hypothesis_ok() const {
    return std::pow(a, k) > k * beta;
}

namespace {

void require_x_in_domain(double x, double a) {
    if (x < 0.0 || x > a) {
        throw std::domain_error("kernel: x=" + std::to_string(x) + " outside [0, " +
                                std::to_string(a) + "]");
    }
}

double filter_at_offset(const KernelParams& p, double lambda_n, double r) {
    // 1 / (2 beta s^k e^{s(a-r)} + 2 e^{-sr}); r is the distance from the data line.
    const double s = std::sqrt(p.alpha * lambda_n);
    const double sk = std::pow(s, p.k);
    const double denom = 2.0 * p.beta * sk * std::exp(s * (p.a - r)) + 2.0 * std::exp(-s * r);
    return 1.0 / denom;
}

}  // namespace

double filter_value(const KernelParams& p, double lambda_n, double x) {
    p.validate();
    if (!(lambda_n > 0.0)) {
        throw std::invalid_argument("kernel: lambda_n must be positive, got " +
                                    std::to_string(lambda_n));
    }
    require_x_in_domain(x, p.a);
    return filter_at_offset(p, lambda_n, x);
}

double shifted_filter_value(const KernelParams& p, double lambda_n, double x, double xi) {
    p.validate();
    if (!(lambda_n > 0.0)) {
        throw std::invalid_argument("kernel: lambda_n must be positive, got " +
                                    std::to_string(lambda_n));
    }
    require_x_in_domain(x, p.a);
    if (xi < 0.0 || xi > x) {
        throw std::invalid_argument("kernel: shift xi=" + std::to_string(xi) +
                                    " outside [0, x=" + std::to_string(x) + "]");
    }
    return filter_at_offset(p, lambda_n, x - xi);
}

double filter_bound(const KernelParams& p, double x) {
    p.validate();
    require_x_in_domain(x, p.a);
    if (p.beta == 0.0 || !p.hypothesis_ok()) {
        throw HypothesisError("kernel: filter bound requires a^k > k*beta with beta > 0, got a=" +
                                  std::to_string(p.a) + " k=" + std::to_string(p.k) +
                                  " beta=" + std::to_string(p.beta),
                              p.a, p.k, p.beta);
    }
    // log form of (1/2) (ka)^{kx/a} beta^{-x/a} L^{-kx/a}, L = ln(a^k/(k beta)) > 0.
    const double log_l = p.k * std::log(p.a) - std::log(p.k * p.beta);
    const double exponent =
        (x / p.a) * (p.k * std::log(p.k * p.a) - std::log(p.beta) - p.k * std::log(log_l));
    return 0.5 * std::exp(exponent);
}

namespace detail {

PropagatorL propagator_l(double alpha, double lambda_n, double x) {
    if (!(alpha > 0.0) || !(lambda_n > 0.0)) {
        throw std::invalid_argument("kernel: propagator needs alpha > 0 and lambda_n > 0");
    }
    if (x < 0.0) {
        throw std::domain_error("kernel: propagator argument x must be >= 0, got " +
                                std::to_string(x));
    }
    const double s = std::sqrt(alpha * lambda_n);
    const long double sx = static_cast<long double>(s) * static_cast<long double>(x);
    return PropagatorL{std::cosh(sx), std::sinh(sx) / static_cast<long double>(s)};
}

}  // namespace detail

PropagatorValues unregularized_cosh_sinh(double alpha, double lambda_n, double x) {
    const detail::PropagatorL p = detail::propagator_l(alpha, lambda_n, x);
    PropagatorValues out;
    constexpr long double kMax = std::numeric_limits<double>::max();
    out.saturated = !(p.cosh_sx <= kMax && std::fabs(p.sinh_sx_over_s) <= kMax) ||
                    !std::isfinite(static_cast<double>(p.cosh_sx));
    out.cosh_sx = static_cast<double>(p.cosh_sx);
    out.sinh_sx_over_s = static_cast<double>(p.sinh_sx_over_s);
    return out;
}

}  // namespace sgreg
