#pragma once

#include <stdexcept>
#include <string>

namespace hardyp {

// Thrown when an iterative scheme fails to converge (bracket growth,
// quadrature panel overflow, step-size underflow, ...).  The CLI maps
// this to exit code 3.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a computation contradicts a proved necessary condition
// (e.g. two distinct shooting roots where uniqueness holds).  The CLI maps
// this to exit code 1.
class verification_error : public std::runtime_error {
public:
    explicit verification_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hardyp
