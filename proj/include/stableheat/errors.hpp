#pragma once

#include <stdexcept>
#include <string>

namespace stableheat {

/// Raised when inputs violate a documented precondition (bad parameter
/// ranges, malformed configs, mismatched dimensions). CLI maps this to
/// exit code 2.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when an exact enumeration would exceed its tuple budget.
/// CLI maps this (like other runtime failures) to exit code 1.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace stableheat
