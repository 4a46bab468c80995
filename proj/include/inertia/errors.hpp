#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace inertia {

// Argument outside the mathematical domain of a formula (e.g. zero inertia).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Day-ahead requirement larger than what the fleet can offer.
class InfeasibleRequirement : public std::runtime_error {
public:
    InfeasibleRequirement(double requirement, double capacity);
    double requirement() const noexcept { return requirement_; }
    double capacity() const noexcept { return capacity_; }

private:
    double requirement_;
    double capacity_;
};

// Invalid parameters, configuration files or grids.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed or invalid dataset content.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An iterative fit that did not reach its stopping criterion.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<double> trajectory)
        : std::runtime_error(what), trajectory_(std::move(trajectory)) {}
    const std::vector<double>& trajectory() const noexcept { return trajectory_; }

private:
    std::vector<double> trajectory_;
};

// Training failed on every restart.
class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace inertia
