#pragma once

// Run configuration: a nested key-value tree (YAML or JSON on disk), merged over per-command
// defaults, overridden by `--set block.key=value`, then checked into typed blocks.

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "recoil/recoil.hpp"

namespace recoil::cli {

/// Raised for anything the user can fix in the config or on the command line (exit code 2).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Command { sweep_frequency, map, sweep_bias, angle, efc, farfield, pump, force_point };

std::string_view to_string(Command c);
std::optional<Command> parse_command(std::string_view s);
const std::vector<Command>& all_commands();

struct SweepBlock {
    std::string variable;
    double lo = 0.0;
    double hi = 0.0;
    int steps = 1;

    [[nodiscard]] std::vector<double> grid() const;
};

struct MapBlock {
    double omega_c_lo = -1.0;
    double omega_c_hi = 1.0;
    int omega_c_steps = 41;

    [[nodiscard]] std::vector<double> grid() const;
};

struct OutputBlock {
    std::string path = "-";  ///< "-" writes to stdout
    std::string format = "csv";
};

struct RunConfig {
    Command command = Command::force_point;
    PlasmaParams material;
    Emitter emitter;
    SweepBlock sweep;
    MapBlock map;
    QuadratureSpec quadrature;
    ForcePath path = ForcePath::exact;
    PumpConfig pump;
    WavenumberRange efc;
    FarFieldOptions farfield;
    OutputBlock output;
    nlohmann::json resolved;  ///< the full merged tree, embedded in every output header
};

/// Default tree for a command, including its sweep variable and grid.
nlohmann::json default_tree(Command c);

/// Parse a config file; JSON when the extension is .json or the text opens with '{', YAML otherwise.
nlohmann::json load_tree(const std::string& path);

/// Parse YAML text (JSON is accepted too) into a JSON tree.
nlohmann::json parse_tree(const std::string& text);

/// Apply one "a.b.c=value" override; the value is read as a YAML scalar or flow sequence.
void apply_override(nlohmann::json& tree, std::string_view assignment);

/// Recursive merge; objects merge key by key, everything else replaces.
void merge_into(nlohmann::json& base, const nlohmann::json& patch);

/// Validate the tree and build typed blocks.  Unknown keys are rejected.
RunConfig build_config(Command c, const nlohmann::json& tree);

}  // namespace recoil::cli
