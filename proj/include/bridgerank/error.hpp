#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bridgerank {

// Base for every domain/validation failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file; carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& what)
        : Error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

// Raised when SGD/Adam produce a non-finite parameter.
class TrainingDiverged : public Error {
public:
    using Error::Error;
};

}  // namespace bridgerank
