#pragma once

#include <stdexcept>
#include <string>

namespace entbound {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed input file or configuration. Carries the 1-based line when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A structural invariant of a domain object does not hold (e.g. d_0 != 1).
class InvariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Density matrix with an eigenvalue below the positivity slack.
class PositivityError : public InvariantError {
public:
    using InvariantError::InvariantError;
};

/// A series that should converge does not, or leaves the double range.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical construction failed to reach its tolerance.
class ConstructionError : public std::runtime_error {
public:
    ConstructionError(const std::string& what, double residual)
        : std::runtime_error(what + " (worst residual " + std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Requested problem exceeds a configured size limit.
class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

}  // namespace entbound
