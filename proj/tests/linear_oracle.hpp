#pragma once

#include <cmath>
#include <vector>

#include "sgreg/problem.hpp"

namespace sgreg::testing {

/// Per-mode Picard iteration for the gamma = 0 (linear) system in extended
/// precision, with the filter in its raw textbook form. Test-side oracle,
/// independent of the production solver's stable-form kernels and
/// pseudo-spectral path.
struct OracleModeSolution {
    std::vector<long double> u;
    std::vector<long double> v;
};

inline OracleModeSolution linear_mode_oracle(double alpha1, double alpha2, double lambda,
                                             double a, double k, double beta,
                                             const Matrix2& sigma, long double u0,
                                             long double u1, long double v0, long double v1,
                                             const std::vector<double>& f1hat,
                                             const std::vector<double>& f2hat, int n_x) {
    const long double al = a;
    const long double h = al / static_cast<long double>(n_x - 1);
    const long double s1 = std::sqrt(static_cast<long double>(alpha1) * lambda);
    const long double s2 = std::sqrt(static_cast<long double>(alpha2) * lambda);
    auto psi = [&](long double s, long double r) {
        return std::exp(-s * (al - r)) /
               (2.0L * static_cast<long double>(beta) * std::pow(s, static_cast<long double>(k)) +
                2.0L * std::exp(-s * al));
    };

    std::vector<long double> data_u(n_x), data_v(n_x), kern_u(n_x), kern_v(n_x);
    for (int j = 0; j < n_x; ++j) {
        const long double x = h * j;
        data_u[j] = (psi(s1, x) + 0.5L * std::exp(-s1 * x)) * u0 +
                    (psi(s1, x) - 0.5L * std::exp(-s1 * x)) / s1 * u1;
        data_v[j] = (psi(s2, x) + 0.5L * std::exp(-s2 * x)) * v0 +
                    (psi(s2, x) - 0.5L * std::exp(-s2 * x)) / s2 * v1;
        kern_u[j] = (psi(s1, x) - 0.5L * std::exp(-s1 * x)) / s1;
        kern_v[j] = (psi(s2, x) - 0.5L * std::exp(-s2 * x)) / s2;
    }

    OracleModeSolution cur{data_u, data_v};
    OracleModeSolution next{std::vector<long double>(n_x), std::vector<long double>(n_x)};
    for (int iter = 0; iter < 500; ++iter) {
        long double diff = 0.0L;
        for (int j = 0; j < n_x; ++j) {
            long double acc_u = 0.0L;
            long double acc_v = 0.0L;
            for (int l = 0; j > 0 && l <= j; ++l) {
                const long double w = (l == 0 || l == j) ? 0.5L * h : h;
                const long double fu = static_cast<long double>(f1hat[l]) -
                                       sigma[0][0] * cur.u[l] - sigma[0][1] * cur.v[l];
                const long double fv = static_cast<long double>(f2hat[l]) -
                                       sigma[1][0] * cur.u[l] - sigma[1][1] * cur.v[l];
                acc_u += w * kern_u[j - l] * fu;
                acc_v += w * kern_v[j - l] * fv;
            }
            next.u[j] = data_u[j] + acc_u;
            next.v[j] = data_v[j] + acc_v;
            diff = std::max(diff, std::fabs(next.u[j] - cur.u[j]));
            diff = std::max(diff, std::fabs(next.v[j] - cur.v[j]));
        }
        cur = next;
        if (diff <= 1e-16L) {
            break;
        }
    }
    return cur;
}

}  // namespace sgreg::testing
