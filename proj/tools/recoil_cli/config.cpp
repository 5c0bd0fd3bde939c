#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace recoil::cli {

using nlohmann::json;

namespace {

constexpr std::pair<Command, std::string_view> kNames[] = {
    {Command::sweep_frequency, "sweep-frequency"},
    {Command::map, "map"},
    {Command::sweep_bias, "sweep-bias"},
    {Command::angle, "angle"},
    {Command::efc, "efc"},
    {Command::farfield, "farfield"},
    {Command::pump, "pump"},
    {Command::force_point, "force-point"},
};

json yaml_to_json(const YAML::Node& n) {
    switch (n.Type()) {
        case YAML::NodeType::Null:
        case YAML::NodeType::Undefined: return nullptr;
        case YAML::NodeType::Sequence: {
            json arr = json::array();
            for (const auto& e : n) arr.push_back(yaml_to_json(e));
            return arr;
        }
        case YAML::NodeType::Map: {
            json obj = json::object();
            for (const auto& kv : n) obj[kv.first.as<std::string>()] = yaml_to_json(kv.second);
            return obj;
        }
        case YAML::NodeType::Scalar: break;
    }
    const std::string s = n.Scalar();
    if (n.Tag() == "!") return s;  // quoted
    if (s == "~" || s == "null") return nullptr;
    bool b = false;
    if (YAML::convert<bool>::decode(n, b)) return b;
    // integers first so steps stay integral in the resolved tree
    {
        std::size_t pos = 0;
        try {
            long long v = std::stoll(s, &pos);
            if (pos == s.size()) return v;
        } catch (const std::exception&) {
        }
    }
    {
        std::size_t pos = 0;
        try {
            double v = std::stod(s, &pos);
            if (pos == s.size()) return v;
        } catch (const std::exception&) {
        }
    }
    return s;
}

std::string join(const std::string& prefix, const std::string& key) { return prefix.empty() ? key : prefix + "." + key; }

const json& require_object(const json& tree, const std::string& key) {
    static const json empty = json::object();
    auto it = tree.find(key);
    if (it == tree.end() || it->is_null()) return empty;
    if (!it->is_object()) throw config_error("'" + key + "' must be a block of key-value pairs");
    return *it;
}

void check_keys(const json& block, const std::string& where, std::initializer_list<std::string_view> allowed) {
    for (const auto& [k, v] : block.items()) {
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
            std::ostringstream os;
            os << "unknown key '" << join(where, k) << "' (allowed:";
            for (auto a : allowed) os << ' ' << a;
            os << ')';
            throw config_error(os.str());
        }
    }
}

double get_number(const json& block, const std::string& where, const std::string& key) {
    auto it = block.find(key);
    if (it == block.end()) throw config_error("missing key '" + join(where, key) + "'");
    if (!it->is_number()) throw config_error("'" + join(where, key) + "' must be a number");
    const double v = it->get<double>();
    if (!std::isfinite(v)) throw config_error("'" + join(where, key) + "' must be finite");
    return v;
}

std::optional<double> get_optional_number(const json& block, const std::string& where, const std::string& key) {
    auto it = block.find(key);
    if (it == block.end() || it->is_null()) return std::nullopt;
    return get_number(block, where, key);
}

int get_int(const json& block, const std::string& where, const std::string& key) {
    const double v = get_number(block, where, key);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw config_error("'" + join(where, key) + "' must be an integer");
    return static_cast<int>(v);
}

std::string get_string(const json& block, const std::string& where, const std::string& key) {
    auto it = block.find(key);
    if (it == block.end()) throw config_error("missing key '" + join(where, key) + "'");
    if (!it->is_string()) throw config_error("'" + join(where, key) + "' must be a string");
    return it->get<std::string>();
}

std::pair<double, double> get_range(const json& block, const std::string& where, const std::string& key) {
    auto it = block.find(key);
    if (it == block.end()) throw config_error("missing key '" + join(where, key) + "'");
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number()) {
        throw config_error("'" + join(where, key) + "' must be a pair [start, stop]");
    }
    const double a = (*it)[0].get<double>();
    const double b = (*it)[1].get<double>();
    if (!std::isfinite(a) || !std::isfinite(b)) throw config_error("'" + join(where, key) + "' must be finite");
    return {a, b};
}

Eigen::Vector3d get_triplet(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 3) throw config_error("'" + where + "' must be a list of three numbers");
    Eigen::Vector3d out;
    for (int i = 0; i < 3; ++i) {
        if (!v[i].is_number()) throw config_error("'" + where + "' must be a list of three numbers");
        out(i) = v[i].get<double>();
    }
    if (!out.allFinite()) throw config_error("'" + where + "' must be finite");
    return out;
}

Eigen::Vector3cd get_dipole(const json& v, const std::string& where) {
    if (v.is_array()) return get_triplet(v, where).cast<cplx>();
    if (v.is_object()) {
        check_keys(v, where, {"re", "im"});
        Eigen::Vector3d re = Eigen::Vector3d::Zero();
        Eigen::Vector3d im = Eigen::Vector3d::Zero();
        if (v.contains("re")) re = get_triplet(v.at("re"), where + ".re");
        if (v.contains("im")) im = get_triplet(v.at("im"), where + ".im");
        return re.cast<cplx>() + I * im.cast<cplx>();
    }
    throw config_error("'" + where + "' must be [x, y, z] or {re: [..], im: [..]}");
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    if (n == 1) {
        g[0] = lo;
        return g;
    }
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return g;
}

json sweep_default(Command c) {
    switch (c) {
        case Command::sweep_frequency:
        case Command::map: return {{"variable", "omega0"}, {"range", {0.45, 1.0}}, {"steps", 111}};
        case Command::angle: return {{"variable", "omega0"}, {"range", {0.5, 1.0}}, {"steps", 101}};
        case Command::sweep_bias: return {{"variable", "omega_c"}, {"range", {0.0, 1.0}}, {"steps", 101}};
        case Command::efc:
        case Command::farfield: return {{"variable", "theta"}, {"range", {-180.0, 180.0}}, {"steps", 721}};
        case Command::pump: return {{"variable", "t_tilde"}, {"range", {0.0, 20.0}}, {"steps", 201}};
        case Command::force_point: return {{"variable", "none"}, {"range", {0.0, 0.0}}, {"steps", 1}};
    }
    return json::object();
}

}  // namespace

std::string_view to_string(Command c) {
    for (const auto& [cmd, name] : kNames) {
        if (cmd == c) return name;
    }
    return "unknown";
}

std::optional<Command> parse_command(std::string_view s) {
    for (const auto& [cmd, name] : kNames) {
        if (name == s) return cmd;
    }
    return std::nullopt;
}

const std::vector<Command>& all_commands() {
    static const std::vector<Command> v = [] {
        std::vector<Command> out;
        for (const auto& [cmd, name] : kNames) out.push_back(cmd);
        return out;
    }();
    return v;
}

std::vector<double> SweepBlock::grid() const { return linspace(lo, hi, steps); }

std::vector<double> MapBlock::grid() const { return linspace(omega_c_lo, omega_c_hi, omega_c_steps); }

json default_tree(Command c) {
    return {
        {"material", {{"omega_p_SI", nullptr}, {"omega_c", 0.4}, {"gamma_damp", 0.015}}},
        {"emitter", {{"dipole", {0.0, 0.0, 1.0}}, {"debye", nullptr}, {"d", 0.01}, {"omega0", 0.7}}},
        {"sweep", sweep_default(c)},
        {"map", {{"omega_c_range", {-1.0, 1.0}}, {"omega_c_steps", 41}}},
        {"quadrature", {{"cutoff", 30.0}, {"tolerance", 1e-6}}},
        {"force", {{"path", "exact"}}},
        {"pump", {{"Omega_tilde", 0.0}}},
        {"efc", {{"q_max", 1000.0}, {"scan_points", 400}}},
        {"farfield", {{"bin_width_deg", 1.0}, {"smoothing_half_width", 3}}},
        {"output", {{"path", "-"}, {"format", "csv"}}},
    };
}

json parse_tree(const std::string& text) {
    try {
        return yaml_to_json(YAML::Load(text));
    } catch (const YAML::Exception& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
}

json load_tree(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const auto first = std::find_if(text.begin(), text.end(), [](unsigned char ch) { return !std::isspace(ch); });
    const bool is_json = (path.size() >= 5 && path.substr(path.size() - 5) == ".json") ||
                         (first != text.end() && *first == '{');
    json tree;
    if (is_json) {
        try {
            tree = json::parse(text);
        } catch (const json::parse_error& e) {
            throw config_error("config parse error in '" + path + "': " + e.what());
        }
    } else {
        tree = parse_tree(text);
    }
    if (tree.is_null()) tree = json::object();
    if (!tree.is_object()) throw config_error("config file '" + path + "' must hold a block of key-value pairs");
    return tree;
}

void merge_into(json& base, const json& patch) {
    if (!base.is_object() || !patch.is_object()) {
        base = patch;
        return;
    }
    for (const auto& [k, v] : patch.items()) {
        if (v.is_object() && base.contains(k) && base[k].is_object()) {
            merge_into(base[k], v);
        } else {
            base[k] = v;
        }
    }
}

void apply_override(json& tree, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw config_error("override '" + std::string(assignment) + "' must look like block.key=value");
    }
    const std::string key(assignment.substr(0, eq));
    const std::string value(assignment.substr(eq + 1));
    json* node = &tree;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw config_error("override key '" + key + "' has an empty component");
        if (!node->is_object()) throw config_error("override key '" + key + "' descends into a non-block value");
        node = &(*node)[part];
        if (dot == std::string::npos) break;
        if (node->is_null()) *node = json::object();
        start = dot + 1;
    }
    *node = parse_tree(value);
}

RunConfig build_config(Command c, const json& tree) {
    if (!tree.is_object()) throw config_error("config must be a block of key-value pairs");
    check_keys(tree, "",
               {"material", "emitter", "sweep", "map", "quadrature", "force", "pump", "efc", "farfield", "output"});
    RunConfig cfg;
    cfg.command = c;
    cfg.resolved = tree;

    const json& mat = require_object(tree, "material");
    check_keys(mat, "material", {"omega_p_SI", "omega_c", "gamma_damp"});
    cfg.material.omega_c = get_number(mat, "material", "omega_c");
    cfg.material.gamma_damp = get_number(mat, "material", "gamma_damp");
    cfg.material.omega_p_si = get_optional_number(mat, "material", "omega_p_SI");

    const json& em = require_object(tree, "emitter");
    check_keys(em, "emitter", {"dipole", "debye", "d", "omega0"});
    if (!em.contains("dipole")) throw config_error("missing key 'emitter.dipole'");
    cfg.emitter.gamma_vec = get_dipole(em.at("dipole"), "emitter.dipole");
    cfg.emitter.d = get_number(em, "emitter", "d");
    cfg.emitter.omega0 = get_number(em, "emitter", "omega0");
    cfg.emitter.gamma_debye = get_optional_number(em, "emitter", "debye").value_or(0.0);

    const json& sw = require_object(tree, "sweep");
    check_keys(sw, "sweep", {"variable", "range", "steps"});
    cfg.sweep.variable = get_string(sw, "sweep", "variable");
    std::tie(cfg.sweep.lo, cfg.sweep.hi) = get_range(sw, "sweep", "range");
    cfg.sweep.steps = get_int(sw, "sweep", "steps");
    const std::string expected = sweep_default(c).at("variable").get<std::string>();
    if (cfg.sweep.variable != expected) {
        throw config_error("command '" + std::string(to_string(c)) + "' sweeps '" + expected + "', not '" +
                           cfg.sweep.variable + "'");
    }
    if (cfg.sweep.steps < 1) throw config_error("'sweep.steps' must be >= 1");

    const json& mp = require_object(tree, "map");
    check_keys(mp, "map", {"omega_c_range", "omega_c_steps"});
    std::tie(cfg.map.omega_c_lo, cfg.map.omega_c_hi) = get_range(mp, "map", "omega_c_range");
    cfg.map.omega_c_steps = get_int(mp, "map", "omega_c_steps");
    if (cfg.map.omega_c_steps < 1) throw config_error("'map.omega_c_steps' must be >= 1");

    const json& qd = require_object(tree, "quadrature");
    check_keys(qd, "quadrature", {"cutoff", "tolerance"});
    cfg.quadrature.cutoff = get_number(qd, "quadrature", "cutoff");
    cfg.quadrature.rel_tol = get_number(qd, "quadrature", "tolerance");

    const json& fc = require_object(tree, "force");
    check_keys(fc, "force", {"path"});
    const std::string path = get_string(fc, "force", "path");
    const auto parsed = parse_force_path(path);
    if (!parsed) {
        throw config_error("'force.path' must be one of exact, quasistatic-integral, quasistatic-residue, weak-bias (got '" +
                           path + "')");
    }
    cfg.path = *parsed;

    const json& pu = require_object(tree, "pump");
    check_keys(pu, "pump", {"Omega_tilde"});
    cfg.pump.Omega_tilde = get_number(pu, "pump", "Omega_tilde");

    const json& ef = require_object(tree, "efc");
    check_keys(ef, "efc", {"q_max", "scan_points"});
    cfg.efc.q_max = get_number(ef, "efc", "q_max");
    cfg.efc.scan_points = get_int(ef, "efc", "scan_points");

    const json& ff = require_object(tree, "farfield");
    check_keys(ff, "farfield", {"bin_width_deg", "smoothing_half_width"});
    cfg.farfield.bin_width_deg = get_number(ff, "farfield", "bin_width_deg");
    cfg.farfield.smoothing_half_width = get_int(ff, "farfield", "smoothing_half_width");
    cfg.farfield.height = cfg.emitter.d;
    if (!(cfg.farfield.bin_width_deg > 0.0 && cfg.farfield.bin_width_deg <= 30.0)) {
        throw config_error("'farfield.bin_width_deg' must lie in (0, 30]");
    }
    if (cfg.farfield.smoothing_half_width < 0) throw config_error("'farfield.smoothing_half_width' must be >= 0");

    const json& out = require_object(tree, "output");
    check_keys(out, "output", {"path", "format"});
    cfg.output.path = get_string(out, "output", "path");
    cfg.output.format = get_string(out, "output", "format");
    if (cfg.output.format != "csv" && cfg.output.format != "json") {
        throw config_error("'output.format' must be csv or json");
    }

    // library-level invariants, reported as config errors
    try {
        validate(cfg.material);
        validate(cfg.emitter);
        validate(cfg.quadrature);
        validate(cfg.pump);
        validate(cfg.efc);
    } catch (const recoil::error& e) {
        throw config_error(e.what());
    }
    if (c == Command::pump && cfg.sweep.lo < 0.0) throw config_error("'sweep.range' for pump must start at t >= 0");
    if ((c == Command::efc || c == Command::farfield) && cfg.sweep.steps < 8) {
        throw config_error("'sweep.steps' must be >= 8 for contour tracing");
    }
    return cfg;
}

}  // namespace recoil::cli
