#pragma once

#include <stdexcept>
#include <string>

namespace anyon {

/// Invalid grid, kernel, run or file configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value outside the domain of an operation (negative occupation, ceiling breach, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Violation of an internal invariant that valid inputs cannot produce.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Malformed input file; the message carries the line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

} // namespace anyon
