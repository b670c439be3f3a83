#pragma once

#include <stdexcept>
#include <string>

namespace stochlab {

// Validation failures on caller-supplied data or parameters.
struct rejected_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct rejected_parameters : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct undefined_correlation : std::domain_error {
    using std::domain_error::domain_error;
};

struct insufficient_data : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An iterative scheme failed to meet its convergence contract.
struct numerical_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct saddle_not_found : numerical_failure {
    using numerical_failure::numerical_failure;
};

struct invalid_saddle : numerical_failure {
    using numerical_failure::numerical_failure;
};

// Probability mass escaped the configured grid.
struct grid_overflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Closed form requested outside the regime it was derived for.
struct out_of_regime : std::domain_error {
    using std::domain_error::domain_error;
};

struct out_of_support : std::domain_error {
    using std::domain_error::domain_error;
};

} // namespace stochlab
