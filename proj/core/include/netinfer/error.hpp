#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netinfer {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Preconditions violated: wrong shapes, non-finite values, empty sets.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// An iterative solver ran out of budget before meeting its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double final_violation, std::size_t iterations)
        : Error(what), violation_(final_violation), iterations_(iterations) {}

    double violation() const noexcept { return violation_; }
    std::size_t iterations() const noexcept { return iterations_; }

private:
    double violation_;
    std::size_t iterations_;
};

/// A higher-level computation could not produce any usable result.
class ComputationError : public Error {
public:
    using Error::Error;
};

/// Least-squares design matrix without full column rank.
class DegenerateDesign : public Error {
public:
    using Error::Error;
};

/// Simulated series left the finite range; `timepoint` is 1-based.
class ExplosiveSeries : public Error {
public:
    ExplosiveSeries(const std::string& what, std::size_t timepoint)
        : Error(what), timepoint_(timepoint) {}

    std::size_t timepoint() const noexcept { return timepoint_; }

private:
    std::size_t timepoint_;
};

/// Malformed CSV / JSON input. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::string field = {})
        : Error(what), line_(line), field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

} // namespace netinfer
