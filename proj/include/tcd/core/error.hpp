#pragma once

#include <stdexcept>
#include <string>

namespace tcd {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input files (scene CSV, config files).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : what + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The data cannot support the requested computation (zero variance, singular blocks, ...).
class DegenerateData : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace tcd
