#pragma once

#include <stdexcept>
#include <string>

namespace tabgen {

// Thrown for malformed inputs: bad files, schema mismatches, violated
// preconditions on data. CLI maps this to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when an algorithm fails at runtime on otherwise valid inputs
// (non-finite score, factorization failure). CLI maps this to exit code 3.
class MethodError : public std::runtime_error {
public:
    explicit MethodError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad flag combinations and other command-line misuse. CLI exit code 1.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace tabgen
