#include "app.hpp"

#ifdef RECOIL_CLI11_PACKAGE
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "commands.hpp"
#include "config.hpp"
#include "table.hpp"

namespace recoil::cli {

namespace {

struct Flags {
    std::string config_file;
    std::vector<std::string> overrides;
    std::optional<std::string> path;
    std::optional<std::string> out;
    std::optional<std::string> format;
    bool dry_run = false;
};

void add_common(CLI::App& sub, Flags& f) {
    sub.add_option("-c,--config", f.config_file, "YAML or JSON config file")->check(CLI::ExistingFile);
    sub.add_option("-s,--set", f.overrides, "Override a config value, e.g. --set material.omega_c=0.8")
        ->allow_extra_args(false);
    sub.add_option("--path", f.path, "Force path: exact, quasistatic-integral, quasistatic-residue, weak-bias");
    sub.add_option("-o,--out", f.out, "Output file ('-' for stdout)");
    sub.add_option("--format", f.format, "Output format: csv or json");
    sub.add_flag("--dry-run", f.dry_run, "Print the resolved config as JSON and exit");
}

const char* describe(Command c) {
    switch (c) {
        case Command::sweep_frequency: return "Force against transition frequency";
        case Command::map: return "|F_x| over transition frequency and bias";
        case Command::sweep_bias: return "Force against bias at fixed frequency";
        case Command::angle: return "SPP launch angle against transition frequency";
        case Command::efc: return "Equifrequency contour with group velocities";
        case Command::farfield: return "Normalized SPP far-field pattern";
        case Command::pump: return "Pumped population and force against time";
        case Command::force_point: return "Force at one point with SI conversion";
    }
    return "";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Lateral recoil force on an emitter above a biased plasma half-space", "recoil"};
    app.set_version_flag("--version", std::string("recoil ") + RECOIL_VERSION_STRING);
    app.require_subcommand(1);
    Flags flags;
    std::vector<std::pair<CLI::App*, Command>> subs;
    for (Command c : all_commands()) {
        auto* sub = app.add_subcommand(std::string(to_string(c)), describe(c));
        add_common(*sub, flags);
        subs.emplace_back(sub, c);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForVersion& e) {
        out << e.what() << '\n';
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "recoil: " << e.what() << '\n';
        return config_failure;
    }

    Command cmd = Command::force_point;
    for (const auto& [sub, c] : subs) {
        if (sub->parsed()) cmd = c;
    }

    RunConfig cfg;
    try {
        nlohmann::json tree = default_tree(cmd);
        if (!flags.config_file.empty()) merge_into(tree, load_tree(flags.config_file));
        for (const auto& o : flags.overrides) apply_override(tree, o);
        if (flags.path) tree["force"]["path"] = *flags.path;
        if (flags.out) tree["output"]["path"] = *flags.out;
        if (flags.format) tree["output"]["format"] = *flags.format;
        cfg = build_config(cmd, tree);
    } catch (const config_error& e) {
        err << "recoil: config error: " << e.what() << '\n';
        return config_failure;
    }

    if (flags.dry_run) {
        out << cfg.resolved.dump(2) << '\n';
        return ok;
    }

    Table table;
    try {
        table = run_command(cfg);
    } catch (const numerical_failure& e) {
        err << "recoil: " << e.what() << '\n';
        return numerical_failure_code;
    }

    std::ofstream file;
    std::ostream* dest = &out;
    if (cfg.output.path != "-") {
        file.open(cfg.output.path);
        if (!file) {
            err << "recoil: cannot write '" << cfg.output.path << "'\n";
            return config_failure;
        }
        dest = &file;
    }
    if (cfg.output.format == "json") {
        write_json(*dest, table);
    } else {
        write_csv(*dest, table);
    }
    dest->flush();

    const int code = exit_code_for(table);
    if (code != ok) {
        err << "recoil: " << table.failed_rows << " of " << table.rows.size() << " points failed (see status column)\n";
    }
    return code;
}

}  // namespace recoil::cli
