#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qinterp {

/// Thrown when an exhaustive enumeration would exceed its configured cap.
/// Carries the required count so callers can report actionable numbers.
class BudgetError : public std::runtime_error {
public:
    BudgetError(std::string what, std::uint64_t required, std::uint64_t budget)
        : std::runtime_error(std::move(what)), required_(required), budget_(budget) {}

    std::uint64_t required() const noexcept { return required_; }
    std::uint64_t budget() const noexcept { return budget_; }

private:
    std::uint64_t required_;
    std::uint64_t budget_;
};

/// Thrown when the simplex hits its iteration cap without converging.
/// Distinct from an infeasible verdict: a stall is never reported as
/// infeasibility.
class LpStallError : public std::runtime_error {
public:
    LpStallError(std::string what, std::uint64_t iterations)
        : std::runtime_error(std::move(what)), iterations_(iterations) {}

    std::uint64_t iterations() const noexcept { return iterations_; }

private:
    std::uint64_t iterations_;
};

} // namespace qinterp
