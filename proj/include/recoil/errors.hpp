#pragma once

#include <stdexcept>
#include <string>

namespace recoil {

/// Base class for every failure raised by the solver.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the domain of an operation (zero frequency, negative height, ...).
class domain_error : public error {
public:
    using error::error;
};

/// Boundary matching or mode extraction hit a singular linear system.
class singular_matrix_error : public error {
public:
    using error::error;
};

/// Two selected medium modes coincide and cannot be separated.
class degenerate_mode_error : public error {
public:
    using error::error;
};

/// A root could not be bracketed or polished; the message carries the scan diagnostics.
class root_finding_error : public error {
public:
    using error::error;
};

/// Adaptive quadrature exhausted its subdivision budget.
class quadrature_error : public error {
public:
    using error::error;
};

}  // namespace recoil
