// Error types shared across the circlang library.
#pragma once

#include <stdexcept>
#include <string>

namespace circlang {

// Input outside an operation's mathematical domain.
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Evaluation too close to a pole of a special function.
struct pole_error : domain_error {
    using domain_error::domain_error;
};

// A branch-lift path passes through (or too close to) a denominator zero.
struct branch_error : domain_error {
    using domain_error::domain_error;
};

// Oscillatory-sum cancellation exceeds what double precision can carry.
struct cancellation_error : std::runtime_error {
    double cancellation_ratio;
    explicit cancellation_error(const std::string& msg, double ratio)
        : std::runtime_error(msg), cancellation_ratio(ratio) {}
};

// An ODE/transform validity condition failed (u(s) <= 0 in the Riccati pipeline).
struct validity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace circlang
