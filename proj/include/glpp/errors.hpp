#pragma once

#include <stdexcept>
#include <string>

namespace glpp {

// Path-enumeration guard tripped: the requested lattice has too many
// up-right paths for brute-force evaluation.
struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An injected weight table does not provide a value the recursion needs.
struct shape_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadrature failed to stabilize within the order-doubling cap.
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested combination outside the implemented table (e.g. extreme-value
// normalizers for a distribution that is not handled).
struct feature_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Experiment config rejected; the message carries the offending line number.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace glpp
