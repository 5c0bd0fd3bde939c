#include "commands.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "parallel.hpp"

namespace recoil::cli {

namespace {

constexpr double kDeg = 180.0 / pi;

std::string classify(const std::exception& e) {
    if (dynamic_cast<const quadrature_error*>(&e)) return "quadrature_failed";
    if (dynamic_cast<const singular_matrix_error*>(&e)) return "singular_matrix";
    if (dynamic_cast<const root_finding_error*>(&e)) return "root_not_found";
    if (dynamic_cast<const degenerate_mode_error*>(&e)) return "degenerate_mode";
    if (dynamic_cast<const domain_error*>(&e)) return "domain_error";
    return "error";
}

/// Evaluate one sweep point.  `fill` returns the numeric cells and may set a benign status;
/// exceptions and non-finite values blank the numeric cells and set a failure status.
Row guarded(Row lead, std::size_t n_values, const std::function<std::vector<double>(std::string&)>& fill) {
    std::string status = "ok";
    std::vector<double> values;
    try {
        values = fill(status);
        for (double v : values) {
            if (!std::isfinite(v)) {
                status = "non_finite";
                values.clear();
                break;
            }
        }
    } catch (const std::exception& e) {
        status = classify(e);
        values.clear();
    }
    Row row = std::move(lead);
    for (std::size_t i = 0; i < n_values; ++i) {
        if (i < values.size()) {
            row.emplace_back(values[i]);
        } else {
            row.emplace_back(std::monostate{});
        }
    }
    row.emplace_back(status);
    return row;
}

void count_failures(Table& t) {
    const std::size_t status_col = t.columns.size() - 1;
    t.failed_rows = 0;
    for (const auto& r : t.rows) {
        const auto* s = std::get_if<std::string>(&r[status_col]);
        if (s && !is_benign_status(*s)) ++t.failed_rows;
    }
}

/// Force at one point, with the lossless paths returning zero outside the SPP band.
std::vector<double> force_values(const RunConfig& cfg, const Emitter& em, const PlasmaParams& p, std::string& status) {
    if (cfg.path == ForcePath::quasistatic_residue && !emission_angle(em.omega0, p)) {
        status = "out_of_band";
        return {0.0, 0.0, 0.0};
    }
    if (cfg.path == ForcePath::weak_bias &&
        !(std::abs(em.omega0 - 1.0 / std::sqrt(2.0)) < 0.5 * std::abs(p.omega_c))) {
        status = "out_of_band";
        return {0.0, 0.0, 0.0};
    }
    const ForceResult r = compute_force(cfg.path, em, p, cfg.quadrature);
    return {r.F_tilde_x, r.F_tilde_y, r.err_estimate};
}

void add_common_meta(Table& t, const RunConfig& cfg) {
    const BandEdges b = characteristic_frequencies(cfg.material);
    t.meta.emplace_back("recoil", RECOIL_VERSION_STRING);
    t.meta.emplace_back("command", std::string(to_string(cfg.command)));
    t.meta.emplace_back("force_path", std::string(to_string(cfg.path)));
    t.meta.emplace_back("omega_spp", b.omega_spp);
    t.meta.emplace_back("omega_minus", b.omega_minus);
    t.meta.emplace_back("omega_plus", b.omega_plus);
    t.meta.emplace_back("config", cfg.resolved);
}

Table sweep_frequency(const RunConfig& cfg) {
    Table t;
    t.columns = {"omega0", "F_tilde_x", "F_tilde_y", "err", "status"};
    const auto grid = cfg.sweep.grid();
    t.rows = parallel_map<Row>(grid.size(), [&](std::size_t i) {
        Emitter em = cfg.emitter;
        em.omega0 = grid[i];
        return guarded({grid[i]}, 3, [&](std::string& st) { return force_values(cfg, em, cfg.material, st); });
    });
    return t;
}

Table force_map(const RunConfig& cfg) {
    Table t;
    t.columns = {"omega0", "omega_c", "abs_F_tilde_x", "status"};
    const auto w0 = cfg.sweep.grid();
    const auto wc = cfg.map.grid();
    t.rows = parallel_map<Row>(w0.size() * wc.size(), [&](std::size_t i) {
        Emitter em = cfg.emitter;
        em.omega0 = w0[i % w0.size()];
        PlasmaParams p = cfg.material;
        p.omega_c = wc[i / w0.size()];
        return guarded({em.omega0, p.omega_c}, 1, [&](std::string& st) -> std::vector<double> {
            return {std::abs(force_values(cfg, em, p, st)[0])};
        });
    });
    return t;
}

Table sweep_bias(const RunConfig& cfg) {
    Table t;
    t.columns = {"omega_c", "F_tilde_x", "err", "status"};
    const auto grid = cfg.sweep.grid();
    t.rows = parallel_map<Row>(grid.size(), [&](std::size_t i) {
        PlasmaParams p = cfg.material;
        p.omega_c = grid[i];
        return guarded({grid[i]}, 2, [&](std::string& st) -> std::vector<double> {
            const auto v = force_values(cfg, cfg.emitter, p, st);
            return {v[0], v[2]};
        });
    });
    return t;
}

Table angle(const RunConfig& cfg) {
    Table t;
    t.columns = {"omega0", "theta0_deg", "status"};
    for (double w : cfg.sweep.grid()) {
        Row row{w};
        if (auto th = emission_angle(w, cfg.material)) {
            row.emplace_back(*th * kDeg);
            row.emplace_back(std::string("ok"));
        } else {
            row.emplace_back(std::monostate{});
            row.emplace_back(std::string("out_of_band"));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<double> theta_grid_rad(const RunConfig& cfg) {
    auto g = cfg.sweep.grid();
    for (double& v : g) v /= kDeg;
    return g;
}

EfcContour traced(const RunConfig& cfg) {
    try {
        return trace_efc(cfg.emitter.omega0, cfg.material, theta_grid_rad(cfg), cfg.efc);
    } catch (const recoil::error& e) {
        throw numerical_failure(std::string("contour tracing failed: ") + e.what());
    }
}

Table efc(const RunConfig& cfg) {
    Table t;
    t.columns = {"theta_deg", "kx_over_k0", "ky_over_k0", "vgx", "vgy", "topology", "branch"};
    const EfcContour c = traced(cfg);
    const std::string topo = to_string(c.topology);
    for (const auto& s : c.branches) {
        const Eigen::Vector2d vg = s.vg_norm * s.vg_dir;
        t.rows.push_back(Row{s.theta * kDeg, s.k * std::cos(s.theta), s.k * std::sin(s.theta), vg.x(), vg.y(), topo,
                             static_cast<long long>(s.branch)});
    }
    t.meta.emplace_back("omega", c.omega);
    t.meta.emplace_back("topology", topo);
    t.meta.emplace_back("multi_root", c.multi_root);
    return t;
}

Table farfield(const RunConfig& cfg) {
    Table t;
    t.columns = {"azimuth_deg", "intensity"};
    const EfcContour c = traced(cfg);
    FarFieldPattern pat;
    try {
        pat = farfield_pattern(c, cfg.emitter.unit_dipole(), cfg.material, cfg.farfield);
    } catch (const recoil::error& e) {
        throw numerical_failure(std::string("far-field evaluation failed: ") + e.what());
    }
    for (std::size_t i = 0; i < pat.azimuth.size(); ++i) t.rows.push_back(Row{pat.azimuth[i] * kDeg, pat.intensity[i]});
    t.meta.emplace_back("omega", c.omega);
    t.meta.emplace_back("topology", to_string(pat.topology));
    t.meta.emplace_back("lobes", count_lobes(pat));
    return t;
}

Table pump(const RunConfig& cfg) {
    Table t;
    t.columns = {"t_tilde", "rho_ee", "F_tilde_x"};
    ForceTrajectory tr;
    try {
        tr = force_trajectory(cfg.emitter, cfg.material, cfg.quadrature, cfg.pump, cfg.sweep.grid(), cfg.path);
    } catch (const recoil::error& e) {
        throw numerical_failure(std::string("resonant force failed: ") + e.what());
    }
    for (std::size_t i = 0; i < tr.F_tilde_x.size(); ++i) {
        t.rows.push_back(Row{tr.population.t_tilde[i], tr.population.rho_ee[i], tr.F_tilde_x[i]});
    }
    t.meta.emplace_back("F_tilde_x_resonant", tr.resonant.F_tilde_x);
    t.meta.emplace_back("rho_ss", tr.population.rho_ss);
    return t;
}

Table force_point(const RunConfig& cfg) {
    Table t;
    t.columns = {"omega0", "omega_c", "d",     "F_tilde_x", "F_tilde_y", "err",    "F_tilde_x_quasistatic",
                 "delta_rel", "d_nm",   "F0_pN", "F_x_pN",   "F_y_pN",   "status"};
    const Emitter& em = cfg.emitter;
    std::string status = "ok";
    ForceResult r;
    try {
        r = compute_force(cfg.path, em, cfg.material, cfg.quadrature);
    } catch (const std::exception& e) {
        status = classify(e);
    }
    Row row{em.omega0, cfg.material.omega_c, em.d};
    auto opt = [](std::optional<double> v) -> Cell {
        if (v && std::isfinite(*v)) return *v;
        return std::monostate{};
    };
    if (status != "ok") {
        for (int i = 0; i < 9; ++i) row.emplace_back(std::monostate{});
        row.emplace_back(status);
        t.rows.push_back(std::move(row));
        return t;
    }
    std::optional<double> qs;
    try {
        qs = cfg.path == ForcePath::quasistatic_integral ? r.F_tilde_x
                                                          : quasistatic_force_integral(em, cfg.material).F_tilde_x;
    } catch (const recoil::error&) {
    }
    std::optional<double> delta;
    if (qs && r.F_tilde_x != 0.0) delta = std::abs(r.F_tilde_x - *qs) / std::abs(r.F_tilde_x);
    std::optional<double> d_nm;
    if (auto len = cfg.material.length_unit_m()) d_nm = em.d * *len / si::nanometre;
    std::optional<double> f0_pn;
    if (r.F0_SI) f0_pn = *r.F0_SI / si::piconewton;
    row.emplace_back(r.F_tilde_x);
    row.emplace_back(r.F_tilde_y);
    row.emplace_back(r.err_estimate);
    row.emplace_back(opt(qs));
    row.emplace_back(opt(delta));
    row.emplace_back(opt(d_nm));
    row.emplace_back(opt(f0_pn));
    row.emplace_back(opt(f0_pn ? std::optional<double>(*f0_pn * r.F_tilde_x) : std::nullopt));
    row.emplace_back(opt(f0_pn ? std::optional<double>(*f0_pn * r.F_tilde_y) : std::nullopt));
    row.emplace_back(status);
    t.rows.push_back(std::move(row));
    return t;
}

}  // namespace

bool is_benign_status(const std::string& status) { return status == "ok" || status == "out_of_band"; }

Table run_command(const RunConfig& cfg) {
    Table t;
    switch (cfg.command) {
        case Command::sweep_frequency: t = sweep_frequency(cfg); break;
        case Command::map: t = force_map(cfg); break;
        case Command::sweep_bias: t = sweep_bias(cfg); break;
        case Command::angle: t = angle(cfg); break;
        case Command::efc: t = efc(cfg); break;
        case Command::farfield: t = farfield(cfg); break;
        case Command::pump: t = pump(cfg); break;
        case Command::force_point: t = force_point(cfg); break;
    }
    Table out;
    out.columns = std::move(t.columns);
    out.rows = std::move(t.rows);
    add_common_meta(out, cfg);
    for (auto& m : t.meta) out.meta.push_back(std::move(m));
    if (!out.columns.empty() && out.columns.back() == "status") count_failures(out);
    return out;
}

int exit_code_for(const Table& t) {
    if (t.failed_rows == 0) return 0;
    if (t.failed_rows == t.rows.size()) return 3;
    return 4;
}

}  // namespace recoil::cli
