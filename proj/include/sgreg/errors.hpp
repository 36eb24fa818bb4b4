#pragma once

#include <stdexcept>
#include <string>

namespace sgreg {

/// Two grid-valued arguments do not share the same node set or size.
class GridMismatchError : public std::runtime_error {
public:
    explicit GridMismatchError(const std::string& what) : std::runtime_error(what) {}
};

/// The filter-bound hypothesis a^k > k*beta does not hold for the given parameters.
class HypothesisError : public std::runtime_error {
public:
    HypothesisError(const std::string& what, double a, double k, double beta)
        : std::runtime_error(what), a(a), k(k), beta(beta) {}

    double a;
    double k;
    double beta;
};

/// A run configuration is malformed or violates a module invariant.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A study plan cannot produce the requested analysis (e.g. too few points to fit).
class StudyError : public std::runtime_error {
public:
    explicit StudyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sgreg
