#pragma once

#include <stdexcept>
#include <string>

namespace mmsir {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure stopped before reaching its accuracy target.
///
/// Carries the best estimate obtained and the residual (the last observed
/// change or the truncation bound) so callers can decide whether the value
/// is still usable.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double estimate, double residual)
        : std::runtime_error(what + " (estimate " + std::to_string(estimate) +
                             ", residual " + std::to_string(residual) + ")"),
          estimate_(estimate), residual_(residual) {}

    double estimate() const noexcept { return estimate_; }
    double residual() const noexcept { return residual_; }

private:
    double estimate_;
    double residual_;
};

/// Root bracketing or similar structural numeric failure.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Monte-Carlo sampling exceeded its draw budget.
class BudgetError : public std::runtime_error {
public:
    BudgetError(const std::string& what, unsigned long long seed)
        : std::runtime_error(what + " (seed " + std::to_string(seed) + ")"), seed_(seed) {}

    unsigned long long seed() const noexcept { return seed_; }

private:
    unsigned long long seed_;
};

}  // namespace mmsir
