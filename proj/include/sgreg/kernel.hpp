#pragma once

namespace sgreg {

/// Parameters of the regularizing filter for one equation of the coupled system.
struct KernelParams {
    double alpha = 1.0;  ///< diffusivity of the selected equation, > 0
    double a = 1.0;      ///< x-domain length, > 0
    double k = 1.0;      ///< kernel order, >= 1 (real-valued)
    double beta = 0.0;   ///< regularization strength, >= 0

    /// Throws std::invalid_argument when any field is out of range.
    void validate() const;

    /// Hypothesis a^k > k*beta required by the a-priori filter bound.
    bool hypothesis_ok() const;
};

/// Filter value e^{-s(a-x)} / (2 beta s^k + 2 e^{-sa}) with s = sqrt(alpha*lambda_n).
///
/// Evaluated as 1 / (2 beta s^k e^{s(a-x)} + 2 e^{-sx}), which is algebraically
/// identical but stays finite for large s where the raw numerator and
/// denominator both underflow. With beta = 0 this degenerates to the
/// unregularized half-propagator e^{sx}/2.
double filter_value(const KernelParams& p, double lambda_n, double x);

/// Filter at the shifted argument r = x - xi, i.e. e^{-s(a-x+xi)} over the same
/// denominator. Requires 0 <= xi <= x <= a; equals filter_value when xi = 0.
double shifted_filter_value(const KernelParams& p, double lambda_n, double x, double xi);

/// A-priori bound (1/2) (ka)^{kx/a} beta^{-x/a} (ln(a^k/(k beta)))^{-kx/a},
/// valid uniformly in lambda_n whenever a^k > k*beta. Throws HypothesisError
/// when the hypothesis fails or beta = 0 (the log is then undefined).
double filter_bound(const KernelParams& p, double x);

/// cosh(sx) and sinh(sx)/s with s = sqrt(alpha*lambda_n).
struct PropagatorValues {
    double cosh_sx = 1.0;
    double sinh_sx_over_s = 0.0;
    bool saturated = false;  ///< true when the values exceed double range
};

/// Unregularized propagator factors of the mild-solution formulas. Internal
/// evaluation is in extended precision; saturation beyond double range is
/// flagged rather than returned as a silent infinity.
PropagatorValues unregularized_cosh_sinh(double alpha, double lambda_n, double x);

namespace detail {

/// Extended-precision propagator factors shared by the double-precision
/// wrapper above and the exact mild evaluator.
struct PropagatorL {
    long double cosh_sx;
    long double sinh_sx_over_s;
};

PropagatorL propagator_l(double alpha, double lambda_n, double x);

}  // namespace detail

}  // namespace sgreg
