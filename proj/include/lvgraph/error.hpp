#pragma once

#include <stdexcept>
#include <string>

namespace lvg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or semantically invalid input (graph file, config, parameters).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Graph file syntax or content error, carrying the 1-based line number.
class ParseError : public InvalidInput {
public:
    ParseError(std::size_t line, const std::string& what)
        : InvalidInput("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Two fields (or a field and an operator) live on different vertex sets.
class DomainMismatch : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The time integrator produced a non-finite value.
class IntegrationError : public Error {
public:
    using Error::Error;
};

/// A fail-fast trajectory monitor detected a violated invariant.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

}  // namespace lvg
