#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "sgreg/solver.hpp"

namespace sgreg {

/// Noise-level sweep description for the convergence and log-law studies.
struct SweepPlan {
    std::vector<double> epsilons;       ///< strictly decreasing, positive
    double m = 1.0;                     ///< regularization exponent, beta = eps^m
    double k = 1.0;                     ///< kernel order
    std::vector<std::uint64_t> seeds;   ///< replicates per noise level
    std::vector<double> probe_x;        ///< x-locations where errors are recorded

    /// Throws std::invalid_argument on a malformed plan.
    void validate(double a) const;

    bool operator==(const SweepPlan&) const = default;
};

/// One sweep record. Rows flagged excluded do not enter slope fits (solver
/// divergence or error below the discretization floor).
struct StudyRow {
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    double x = 0.0;
    double error = 0.0;
    double beta = 0.0;
    int iterations = 0;
    bool converged = false;
    bool excluded = false;
};

/// Least-squares slope of log(error) against log(epsilon) at one probe point,
/// together with both theoretical exponents (the noise-driven rate m(1 - x/a)
/// and the bias-driven rate 1 - m x/a; which dominates depends on m and x).
struct SlopeFit {
    double x = 0.0;
    double slope = 0.0;
    double expected_noise_rate = 0.0;
    double expected_bias_rate = 0.0;
    int points = 0;
};

struct StudyReport {
    std::vector<StudyRow> rows;
    std::vector<SlopeFit> fitted_slopes;
    std::vector<std::pair<std::string, bool>> verdicts;
    std::vector<std::pair<std::string, double>> metrics;
    std::int64_t runtime_ms = 0;

    bool all_ok() const;
    /// Looks up a named verdict; throws std::out_of_range when absent.
    bool verdict(const std::string& name) const;
    bool has_verdict(const std::string& name) const;
    double metric(const std::string& name) const;
};

/// Sweeps noise levels and seeds over a manufactured problem, records errors
/// at the probe points and fits per-probe convergence slopes. Non-converged
/// solves are flagged and excluded from fits; a study with no converged rows
/// throws StudyError. Verdicts: monotone_ok(x=..) per probe and rate_ok(x=..)
/// per probe with x < a.
StudyReport run_convergence_study(const Manufactured& problem, const SweepPlan& plan,
                                  const Discretization& disc);

/// Solves two noisy samples of the same data and checks the two-solution
/// stability bound with its explicit constant at every x-node. When the
/// growth-factor pre-check fails the study reports itself inapplicable
/// instead of claiming a violation.
StudyReport run_stability_check(const ProblemSpec& spec, const CauchyData& data,
                                const RegularizationConfig& reg, const Discretization& disc,
                                std::uint64_t seed_a, std::uint64_t seed_b, double epsilon);

/// Same sweep as the convergence study but probed at x = a only: checks that
/// errors still decrease in epsilon while the fitted power slope stays <= 0.2,
/// the signature of logarithmic-only convergence at the far boundary.
StudyReport run_loglaw_check(const Manufactured& problem, const SweepPlan& plan,
                             const Discretization& disc);

/// Exhaustively checks the filter against its a-priori bound (and the shifted
/// variant) over n <= n_max, 21 x-points and the given (k, beta) grid.
/// Cells violating the hypothesis a^k > k*beta are skipped and counted.
StudyReport run_lemma_sweep(double a, const std::vector<double>& k_values,
                            const std::vector<double>& beta_values, int n_max, double alpha);

/// Runs the unregularized mild evaluator and the regularized solver on the
/// same noisy sample and compares errors at x = a. Passing epsilon = 0 runs
/// the noise-free control instead. Verdict blowup_ok: the unregularized error
/// exceeds the regularized one by >= 10^3, or the evaluator saturates.
StudyReport run_blowup_contrast(const Manufactured& problem, double epsilon,
                                const Discretization& disc, std::uint64_t seed);

/// Least-squares slope of log(error) against log(epsilon) over (epsilon,
/// error) points; NaN for fewer than two points. Invariant under rescaling
/// all errors by one positive constant (the intercept absorbs it).
double fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

/// CSV with the fixed header epsilon,seed,x,error,beta,iterations,converged;
/// written atomically (temp file + rename).
void write_report_csv(const StudyReport& report, const std::filesystem::path& path);

/// JSON summary (verdicts, slopes, metrics, runtime); written atomically.
void write_report_json(const StudyReport& report, const std::filesystem::path& path);

}  // namespace sgreg
