#pragma once

#include <stdexcept>
#include <string>

namespace jmrel {

/// Raised when a model quantity is requested outside its valid regime,
/// e.g. a failure index at or beyond N0 + 1.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed external input (dataset files, unknown names).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A root solve or refit failed; the message carries the method label.
class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace jmrel
