/**
 * @file errors.hpp
 * @brief Exception types raised by the ctev library.
 *
 * Precondition violations use the standard exception types directly
 * (std::invalid_argument, std::domain_error). The types below name the
 * numerical failure modes that callers commonly want to catch separately.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace ctev {

/// Evaluation at a singular point (Hankel functions at the origin).
class pole_error : public std::domain_error {
public:
    explicit pole_error(const std::string& what) : std::domain_error(what) {}
};

/// The integration contour passes through (or numerically onto) a zero.
class contour_error : public std::runtime_error {
public:
    explicit contour_error(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative method failed to converge within its budget.
class convergence_error : public std::runtime_error {
public:
    explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

/// A modal 2x2 scattering system is (numerically) singular.
class resonance_error : public std::runtime_error {
public:
    explicit resonance_error(const std::string& what) : std::runtime_error(what) {}
};

/// k^2 n is (numerically) a Dirichlet eigenvalue of the unit disk.
class dirichlet_eigenvalue_error : public std::runtime_error {
public:
    explicit dirichlet_eigenvalue_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ctev
