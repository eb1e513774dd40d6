#pragma once

#include <stdexcept>
#include <string>

namespace stperc {

// Bad argument values (negative rates, empty vertex sets, out-of-range
// thresholds and so on).
struct InvalidParameter : std::invalid_argument {
    explicit InvalidParameter(const std::string& what) : std::invalid_argument(what) {}
};

// Problem size exceeds a documented hard limit of the implementation.
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// A configuration or state violates its structural invariants (exact time
// collisions, spins not constant on clusters, unsorted cut lists, ...).
struct CorruptState : std::runtime_error {
    explicit CorruptState(const std::string& what) : std::runtime_error(what) {}
};

// Not enough samples / non-zero cells to form the requested estimate.
struct InsufficientData : std::runtime_error {
    explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

// Numerical routine failed to converge or produced an invalid value.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// A matrix claimed to be a density operator is too far from one.
struct NotAState : std::runtime_error {
    explicit NotAState(const std::string& what) : std::runtime_error(what) {}
};

// Input/output and serialization failures.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stperc
