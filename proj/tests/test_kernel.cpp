#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sgreg/errors.hpp"
#include "sgreg/kernel.hpp"

using namespace sgreg;

namespace {

const long double kPiL = std::acos(-1.0L);

/// Raw textbook form of the filter in extended precision; independent of the
/// rewritten form the implementation uses.
long double filter_oracle(long double alpha, long double lambda, long double a, long double k,
                          long double beta, long double r) {
    const long double s = std::sqrt(alpha * lambda);
    return std::exp(-s * (a - r)) / (2.0L * beta * std::pow(s, k) + 2.0L * std::exp(-s * a));
}

long double bound_oracle(long double a, long double k, long double beta, long double x) {
    const long double log_l = std::log(std::pow(a, k) / (k * beta));
    return 0.5L * std::pow(k * a, k * x / a) * std::pow(beta, -x / a) *
           std::pow(log_l, -k * x / a);
}

}  // namespace

TEST_CASE("filter values against the extended-precision oracle") {
    SUBCASE("beta = 0 collapses to e^{sx}/2") {
        const KernelParams p{1.0, 1.0, 1.0, 0.0};
        const double expected = static_cast<double>(std::exp(1.0L) / 2.0L);  // 1.35914091422952...
        CHECK(filter_value(p, 1.0, 1.0) == doctest::Approx(expected).epsilon(1e-14));
        CHECK(filter_value(p, 1.0, 1.0) == doctest::Approx(1.3591409142295226).epsilon(1e-13));
    }

    SUBCASE("equal denominator terms give 1/4 at x = 0") {
        const KernelParams p{1.0, 1.0, 1.0, std::exp(-1.0)};
        CHECK(filter_value(p, 1.0, 0.0) == doctest::Approx(0.25).epsilon(1e-14));
    }

    SUBCASE("interior value at lambda = pi^2") {
        const KernelParams p{1.0, 1.0, 1.0, 1e-3};
        const double lambda = static_cast<double>(kPiL * kPiL);
        const double expected =
            static_cast<double>(filter_oracle(1.0L, kPiL * kPiL, 1.0L, 1.0L, 1e-3L, 0.5L));
        CHECK(filter_value(p, lambda, 0.5) == doctest::Approx(expected).epsilon(1e-13));
        // 2.2422315301555922 from the same oracle at 30 digits
        CHECK(filter_value(p, lambda, 0.5) == doctest::Approx(2.2422315301555922).epsilon(1e-12));
    }

    SUBCASE("domain and argument validation") {
        const KernelParams p{1.0, 1.0, 1.0, 1e-3};
        CHECK_THROWS_AS(filter_value(p, 1.0, -0.1), std::domain_error);
        CHECK_THROWS_AS(filter_value(p, 1.0, 1.1), std::domain_error);
        CHECK_THROWS_AS(filter_value(p, 0.0, 0.5), std::invalid_argument);
        const KernelParams low_order{1.0, 1.0, 0.5, 0.0};
        CHECK_THROWS_AS(filter_value(low_order, 1.0, 0.5), std::invalid_argument);
    }
}

TEST_CASE("filter degeneracy at beta = 0 holds to 1e-13 over a mode sweep") {
    for (double alpha : {0.5, 1.0, 2.0}) {
        const KernelParams p{alpha, 1.0, 1.0, 0.0};
        for (int n = 1; n <= 50; ++n) {
            const double lambda = static_cast<double>(n) * static_cast<double>(n);
            const double s = std::sqrt(alpha * lambda);
            for (int i = 0; i <= 20; ++i) {
                const double x = static_cast<double>(i) / 20.0;
                const double expected = 0.5 * std::exp(s * x);
                if (!std::isfinite(expected)) {
                    continue;
                }
                CHECK(std::abs(filter_value(p, lambda, x) - expected) <= 1e-13 * expected);
            }
        }
    }
}

TEST_CASE("filter is strictly decreasing in beta and capped at x = 0") {
    for (int n : {1, 4, 30}) {
        const double lambda = static_cast<double>(n * n);
        for (double x : {0.2, 0.7, 1.0}) {
            double previous = std::numeric_limits<double>::infinity();
            for (double beta : {1e-8, 1e-6, 1e-4, 1e-2, 1.0}) {
                const KernelParams p{1.0, 1.0, 1.0, beta};
                const double value = filter_value(p, lambda, x);
                CHECK(value < previous);
                previous = value;
            }
        }
    }
    for (double beta : {0.0, 1e-8, 1e-3, 0.5, 2.0}) {
        const KernelParams p{1.0, 1.0, 1.0, beta};
        for (int n : {1, 7, 100}) {
            CHECK(filter_value(p, static_cast<double>(n * n), 0.0) <= 0.5);
        }
    }
}

TEST_CASE("shifted filter matches the plain filter at the shifted offset") {
    const KernelParams p{1.0, 1.0, 1.0, 1e-3};
    const double lambda = static_cast<double>(kPiL * kPiL);

    CHECK(shifted_filter_value(p, lambda, 0.7, 0.0) == filter_value(p, lambda, 0.7));
    CHECK(shifted_filter_value(p, lambda, 0.8, 0.3) ==
          doctest::Approx(2.2422315301555922).epsilon(1e-12));

    for (double beta : {0.0, 1e-4}) {
        const KernelParams q{1.0, 1.0, 1.0, beta};
        CHECK(shifted_filter_value(q, lambda, 0.6, 0.6) <= 0.5);
    }

    CHECK_THROWS_AS(shifted_filter_value(p, lambda, 0.4, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(shifted_filter_value(p, lambda, 0.4, -0.1), std::invalid_argument);
}

TEST_CASE("filter bound values and hypothesis validation") {
    SUBCASE("x = 0 gives one half") {
        const KernelParams first{1.0, 1.0, 1.0, 1e-3};
        const KernelParams second{2.0, 0.7, 2.0, 1e-2};
        CHECK(filter_bound(first, 0.0) == 0.5);
        CHECK(filter_bound(second, 0.0) == 0.5);
    }

    SUBCASE("interior value against the oracle") {
        const KernelParams p{1.0, 1.0, 1.0, 1e-3};
        const double expected = static_cast<double>(bound_oracle(1.0L, 1.0L, 1e-3L, 0.5L));
        CHECK(filter_bound(p, 0.5) == doctest::Approx(expected).epsilon(1e-13));
        CHECK(filter_bound(p, 0.5) == doctest::Approx(6.0159128006704839).epsilon(1e-12));
    }

    SUBCASE("hypothesis errors carry the offending values") {
        try {
            filter_bound(KernelParams{1.0, 1.0, 1.0, 2.0}, 0.5);
            FAIL("expected HypothesisError");
        } catch (const HypothesisError& err) {
            CHECK(err.a == 1.0);
            CHECK(err.k == 1.0);
            CHECK(err.beta == 2.0);
        }
        const KernelParams no_beta{1.0, 1.0, 1.0, 0.0};
        CHECK_THROWS_AS(filter_bound(no_beta, 0.5), HypothesisError);
    }

    SUBCASE("hypothesis flag") {
        const KernelParams ok{1.0, 1.0, 1.0, 0.5};
        const KernelParams big_beta{1.0, 1.0, 1.0, 2.0};
        const KernelParams small_a{1.0, 0.5, 3.0, 0.1};  // a^k = 0.125 <= 0.3
        CHECK(ok.hypothesis_ok());
        CHECK_FALSE(big_beta.hypothesis_ok());
        CHECK_FALSE(small_a.hypothesis_ok());
    }
}

TEST_CASE("filter bound dominates the filter on the sample grid") {
    const double a = 1.0;
    const std::vector<double> betas = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
    double max_ratio = 0.0;
    double max_shifted_ratio = 0.0;
    for (double k : {1.0, 2.0, 3.0}) {
        for (double beta : betas) {
            const KernelParams p{1.0, a, k, beta};
            REQUIRE(p.hypothesis_ok());
            for (int n = 1; n <= 200; ++n) {
                const double lambda = static_cast<double>(n) * static_cast<double>(n);
                for (int i = 0; i <= 20; ++i) {
                    const double x = a * static_cast<double>(i) / 20.0;
                    max_ratio =
                        std::max(max_ratio, filter_value(p, lambda, x) / filter_bound(p, x));
                    for (int j = 0; j <= i; ++j) {
                        const double xi = a * static_cast<double>(j) / 20.0;
                        max_shifted_ratio =
                            std::max(max_shifted_ratio, shifted_filter_value(p, lambda, x, xi) /
                                                            filter_bound(p, x - xi));
                    }
                }
            }
        }
    }
    CHECK(max_ratio <= 1.0);
    CHECK(max_shifted_ratio <= 1.0);
}

TEST_CASE("unregularized propagator factors") {
    const PropagatorValues at_zero = unregularized_cosh_sinh(1.0, 1.0, 0.0);
    CHECK(at_zero.cosh_sx == 1.0);
    CHECK(at_zero.sinh_sx_over_s == 0.0);
    CHECK_FALSE(at_zero.saturated);

    const PropagatorValues unit = unregularized_cosh_sinh(1.0, 1.0, 1.0);
    CHECK(unit.cosh_sx ==
          doctest::Approx(static_cast<double>(std::cosh(1.0L))).epsilon(1e-14));
    CHECK(unit.sinh_sx_over_s ==
          doctest::Approx(static_cast<double>(std::sinh(1.0L))).epsilon(1e-14));

    // alpha = 4, lambda = pi^2: s = 2 pi
    const PropagatorValues two_pi =
        unregularized_cosh_sinh(4.0, static_cast<double>(kPiL * kPiL), 1.0);
    CHECK(two_pi.cosh_sx ==
          doctest::Approx(static_cast<double>(std::cosh(2.0L * kPiL))).epsilon(1e-13));
    CHECK(two_pi.sinh_sx_over_s ==
          doctest::Approx(static_cast<double>(std::sinh(2.0L * kPiL) / (2.0L * kPiL)))
              .epsilon(1e-13));
    CHECK(two_pi.cosh_sx == doctest::Approx(267.74676148374822).epsilon(1e-12));
    CHECK(two_pi.sinh_sx_over_s == doctest::Approx(42.612923374243530).epsilon(1e-12));

    SUBCASE("saturation is flagged, not silent") {
        const PropagatorValues sat = unregularized_cosh_sinh(1.0, 640000.0, 1.0);  // s = 800
        CHECK(sat.saturated);
        CHECK(std::isinf(sat.cosh_sx));
        const PropagatorValues extreme = unregularized_cosh_sinh(1.0, 1e14, 2.0);
        CHECK(extreme.saturated);
    }

    CHECK_THROWS_AS(unregularized_cosh_sinh(1.0, 1.0, -0.5), std::domain_error);
}
