#pragma once

#include <stdexcept>
#include <string>

namespace rpifs {

// Precondition or argument violations (invalid spec, out-of-range letter,
// degenerate probability vector, non-bracketing search, ...).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// A projective image escaped the affine chart (cone wrapped through the
// point at infinity, iterate hit [1:0], ...).
struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

// Enumeration would exceed the desk-scale product cap.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Operation is defined only for a restricted class (affine system, r = 2,
// translation-part-only transforms) and the input falls outside it.
struct UnsupportedError : std::runtime_error {
    explicit UnsupportedError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rpifs
