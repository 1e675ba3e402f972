#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tsf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input is too short (or too sparse) for the requested operation.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Empty input where at least one value is required.
class EmptyInputError : public Error {
public:
    using Error::Error;
};

/// A stamp or index falls outside the span of a series.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Malformed text input. `position` is the 1-based token (plain) or line (csv).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what), position_(position) {}
    [[nodiscard]] std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// CSV rows do not form a gap-free ascending month sequence.
class ContinuityError : public Error {
public:
    using Error::Error;
};

/// Zero variance or otherwise degenerate input (e.g. constant series fed to an ACF).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Percent error requested against a zero actual value.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An optimizer or recursion failed to produce a finite, admissible result.
///
/// `best_point` carries the best parameter vector seen (possibly empty) so
/// callers can inspect what went wrong.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what, std::vector<double> best_point = {})
        : Error(what), best_point_(std::move(best_point)) {}
    [[nodiscard]] const std::vector<double>& best_point() const noexcept { return best_point_; }

private:
    std::vector<double> best_point_;
};

}  // namespace tsf
