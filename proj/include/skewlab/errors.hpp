#pragma once

#include <stdexcept>
#include <string>

namespace skewlab {

// Input that exceeds a documented size cap (brute-force N, enumeration k, ...).
struct size_error : std::runtime_error {
    explicit size_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A requested window / selection came back empty (e.g. no eigenvalues near E).
struct empty_window_error : std::runtime_error {
    explicit empty_window_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A structural guarantee failed (e.g. a fully preprocessed non-point graph
// without a good cycle). These are never expected to fire.
struct property_violation_error : std::runtime_error {
    explicit property_violation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed external input (frequency files, flag values).
struct input_error : std::runtime_error {
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure (non-finite data, non-converged quadrature).
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace skewlab
