#pragma once

#include <stdexcept>
#include <string>

namespace gnnsim {

// Bad bytes on an input stream. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// A caller handed us arguments outside an operation's domain
// (size mismatch, empty graph where edges are required, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A file could not be opened, read, or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An internal invariant did not hold. Maps to exit code 3 in the CLI.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace gnnsim
