#pragma once

#include <stdexcept>
#include <string>

namespace ajchain {

// Parameter/domain violations (bad region, inadmissible t, out-of-range input).
// The CLI maps these to exit code 1.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical breakdowns (pole hit, non-convergence, quadrature failure).
// The CLI maps these to exit code 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ajchain
