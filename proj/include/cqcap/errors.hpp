#pragma once

#include <stdexcept>
#include <string>

namespace cqcap {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A mathematical object failed its invariants (non-Hermitian input,
// wrong trace, negative eigenvalue, ...). CLI exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Mismatched shapes, out-of-range indices, incompatible arguments.
// CLI exit code 2.
class ArgumentError : public Error {
public:
    using Error::Error;
};

// A configured dimension cap would be exceeded. Raised before any heavy
// allocation. CLI exit code 3.
class ResourceError : public Error {
public:
    using Error::Error;
};

// An iterative routine stopped short of its certificate. CLI exit code 4.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

} // namespace cqcap
