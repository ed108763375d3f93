#pragma once

#include <stdexcept>
#include <string>

namespace effalg {

// Malformed input: ragged tables, out-of-range indices, unparseable files.
// The CLI maps this (and PreconditionError) to exit code 2.
struct StructuralError : std::runtime_error {
    explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

// A documented precondition of an operation does not hold for the given input.
struct PreconditionError : std::invalid_argument {
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

// Two independent routes to the same answer disagreed, or a guaranteed
// post-verification failed. Always a bug (or numerics beyond tolerance),
// never a property of the input. CLI exit code 1.
struct ConsistencyError : std::logic_error {
    explicit ConsistencyError(const std::string& what) : std::logic_error(what) {}
};

// Partial-result refusal: a computed object could not be certified.
struct CertificationError : std::runtime_error {
    explicit CertificationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace effalg
