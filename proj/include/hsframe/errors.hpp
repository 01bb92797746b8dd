#pragma once

#include <stdexcept>
#include <string>

namespace hsframe {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands whose shapes do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Invalid argument or parameter (bad index, nonpositive epsilon, ...).
class SpecError : public Error {
public:
    using Error::Error;
};

/// An eigen- or singular-value solver failed to converge.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A requested enumeration exceeds the configured size cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// A theorem precondition does not hold for the supplied frames.
class HypothesisError : public Error {
public:
    using Error::Error;
};

/// A series that was asked for does not converge.
class DivergenceError : public Error {
public:
    using Error::Error;
};

class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Malformed frame file. `line` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line)
    {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace hsframe
