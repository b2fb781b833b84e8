#pragma once

#include <stdexcept>
#include <string>

namespace mrlmc {

/// Raised when a user-supplied value violates a documented invariant.
/// The message always names the offending field. Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a computation produces ill-defined numbers (non-finite
/// intermediates, zero-norm vectors, singular systems). Maps to exit code 2.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace mrlmc
