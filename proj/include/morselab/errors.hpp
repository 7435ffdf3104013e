#pragma once

#include <stdexcept>
#include <string>

namespace morse {

/// Raised when inputs violate a documented precondition. `kind()` is a short
/// machine-readable tag ("standard_regime", "p_range", ...) that the CLI
/// forwards in its error object.
class InvalidInput : public std::invalid_argument {
public:
    InvalidInput(std::string kind, const std::string& what)
        : std::invalid_argument(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// Raised when a numerical procedure fails (step underflow, loss of
/// positivity, inconsistent root checks).
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

} // namespace morse
