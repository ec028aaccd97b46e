#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ldps {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid argument / configuration errors (bad grid, shape mismatch, ...).
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

/// A trajectory exceeded the configured sup-norm ceiling.
class BlowupError : public Error {
public:
    BlowupError(double time, double sup, double ceiling)
        : Error("solution sup-norm " + std::to_string(sup) + " exceeded ceiling " +
                std::to_string(ceiling) + " at t = " + std::to_string(time)),
          t(time), sup_norm(sup) {}
    double t;
    double sup_norm;
};

/// An iterative method did not reach its tolerance within the iteration cap.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> gaps = {})
        : Error(what), gap_history(std::move(gaps)) {}
    std::vector<double> gap_history;
};

} // namespace ldps
