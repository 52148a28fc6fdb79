#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pairs {

// Root of everything the engine throws on bad input or violated assumptions.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A sequence is shorter than the operation needs.
class LengthError : public Error {
public:
    using Error::Error;
};

// An argument lies outside the mathematical domain (non-positive price,
// gamma outside (0,1), out-of-range index, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// A spread model produced a zero gradient; the allocation scale is undefined there.
class StationaryPointError : public Error {
public:
    using Error::Error;
};

// Regression over a window whose regressor has no variance.
class DegenerateRegressorError : public Error {
public:
    using Error::Error;
};

// Malformed input file. line() is 1-based, 0 when not tied to a row.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Dates not strictly ascending.
class OrderingError : public FormatError {
public:
    using FormatError::FormatError;
};

// Invalid run configuration (flags or config file).
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace pairs
