#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace umrow {

// Thrown for malformed textual input (polynomials, symbol expressions, JSON
// payload shapes). Maps to CLI exit code 2.
struct ParseError : std::runtime_error {
    std::size_t offset;
    ParseError(const std::string& msg, std::size_t off)
        : std::runtime_error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

// Thrown for mathematically invalid requests on well-formed input (wrong ring,
// zero scalar, non-complete-intersection presentation, failed internal
// assertion about exactness). Maps to CLI exit code 1.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct RingMismatchError : DomainError {
    explicit RingMismatchError(const std::string& msg) : DomainError(msg) {}
};

// Thrown when a configured resource cap (Groebner pair budget) is exceeded.
// Distinct from refutation; maps to CLI exit code 3.
struct ResourceAbort : std::runtime_error {
    explicit ResourceAbort(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown for command-line usage problems detected outside CLI11. Exit code 2.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace umrow
