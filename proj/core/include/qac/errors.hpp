#pragma once

#include <stdexcept>
#include <string>

namespace qac {

/// Invalid input outside an operation's admissible parameter region.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// An iterative scheme exhausted its resource budget; carries the last
/// convergence estimate so callers can judge how far off it stopped.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double last_estimate)
        : std::runtime_error(what), last_estimate(last_estimate) {}
    double last_estimate;
};

/// A requested tolerance could not be reached; carries the achieved accuracy.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved(achieved) {}
    double achieved;
};

/// A spectral or thermal window was too small for the requested evaluation.
class TruncationError : public std::runtime_error {
public:
    explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

/// Two independent internal evaluation routes disagreed beyond tolerance.
class ConsistencyError : public std::runtime_error {
public:
    ConsistencyError(const std::string& what, double discrepancy)
        : std::runtime_error(what), discrepancy(discrepancy) {}
    double discrepancy;
};

} // namespace qac
