#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bawcav {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (erf of NaN, T <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A domain object violates one of its invariants. `field()` names the offender.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& message)
        : Error(message), field_(std::move(field)) {}

    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Malformed input file; carries the 1-based line number (0 when not line-specific).
class ParseError : public ValidationError {
public:
    ParseError(std::string source, int line, const std::string& message)
        : ValidationError("", source + ":" + std::to_string(line) + ": " + message),
          source_(std::move(source)), line_(line) {}

    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] const std::string& source() const noexcept { return source_; }

private:
    std::string source_;
    int line_;
};

/// cot(kappa * n * pi / 2) evaluated too close to a pole.
class SingularityError : public Error {
public:
    SingularityError(double kappa, int n, const std::string& message)
        : Error(message), kappa_(kappa), n_(n) {}

    [[nodiscard]] double kappa() const noexcept { return kappa_; }
    [[nodiscard]] int overtone() const noexcept { return n_; }

private:
    double kappa_;
    int n_;
};

/// Piezoelectric readout requested for a material with e_z == 0.
class UnsupportedReadout : public Error {
public:
    using Error::Error;
};

/// An iterative numerical method did not meet its tolerance.
/// `estimate()` is the best value reached, `error_bound()` its error estimate
/// (for eigen-solves: the residual norm).
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& message, double estimate, double error_bound)
        : Error(message), estimate_(estimate), error_bound_(error_bound) {}

    [[nodiscard]] double estimate() const noexcept { return estimate_; }
    [[nodiscard]] double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

}  // namespace bawcav
