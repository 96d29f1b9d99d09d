#pragma once

#include <stdexcept>
#include <string>

namespace tabmark {

// Base for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file (CSV, JSON config, ...).
class ParseError : public Error {
public:
    using Error::Error;
};

// Contract violation on otherwise well-formed data (bad split, support
// mismatch, parameter out of range, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

} // namespace tabmark
