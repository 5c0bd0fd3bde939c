#pragma once

#include <stdexcept>

#include "config.hpp"
#include "table.hpp"

namespace recoil::cli {

/// A command could not produce any result (exit code 3).
struct numerical_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Status strings that describe a physical absence rather than a failed evaluation.
bool is_benign_status(const std::string& status);

/// Run one command.  Per-point failures become status flags in the table; a failure of a
/// command's single underlying computation throws numerical_failure.
Table run_command(const RunConfig& cfg);

/// 0 when every row succeeded, 3 when every row failed, 4 when only some did.
int exit_code_for(const Table& t);

}  // namespace recoil::cli
