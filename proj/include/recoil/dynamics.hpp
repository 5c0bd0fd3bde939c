#pragma once

// Emitter dynamics: decay rate and coupling rates from the Green function, the resonantly
// pumped two-level population in closed form, and the laser gradient-force estimate.

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "recoil/constants.hpp"
#include "recoil/errors.hpp"
#include "recoil/greens.hpp"
#include "recoil/material.hpp"

namespace recoil {

/// Two-level emitter at height d above the interface.
struct Emitter {
    Eigen::Vector3cd gamma_vec{0.0, 0.0, 1.0};  ///< dipole direction; normalized on use
    double d = 0.01;                            ///< height in c / omega_p
    double omega0 = 0.6;                        ///< transition frequency in omega_p
    double gamma_debye = 0.0;                   ///< SI dipole magnitude; 0 when unknown
    double x = 0.0;                             ///< lateral position (two-emitter coupling only)
    double y = 0.0;

    [[nodiscard]] Eigen::Vector3cd unit_dipole() const { return gamma_vec / gamma_vec.norm(); }
    [[nodiscard]] Eigen::Vector3d position() const { return {x, y, d}; }
};

inline void validate(const Emitter& e) {
    if (!(e.d > 0.0)) throw domain_error("Emitter: height d must be positive");
    if (!(e.omega0 > 0.0)) throw domain_error("Emitter: omega0 must be positive");
    if (!(e.gamma_vec.norm() > 0.0) || !e.gamma_vec.allFinite()) throw domain_error("Emitter: gamma_vec must be non-zero");
    if (!(e.gamma_debye >= 0.0)) throw domain_error("Emitter: gamma_debye must be non-negative");
}

// ---------------------------------------------------------------------------------------
// Rates

/// Free-space spontaneous emission rate omega^3 |gamma|^2 / (3 pi eps0 hbar c^3), SI.
inline double free_space_rate_si(double omega_rad_s, double gamma_cm) {
    return std::pow(omega_rad_s, 3) * gamma_cm * gamma_cm / (3.0 * pi * si::epsilon0 * si::hbar * std::pow(si::c, 3));
}

struct DecayRate {
    double purcell = 1.0;               ///< Gamma / Gamma0
    std::optional<double> gamma_si;     ///< Gamma in 1/s when omega_p_si and gamma_debye are known
    double error = 0.0;                 ///< absolute error estimate on the Purcell factor
};

/// Rate from the Green-function contraction (2 omega^2 / eps0 hbar c^2) Im{gamma^H G gamma},
/// SI, for a dipole in vacuum (no substrate).
inline double vacuum_decay_rate_si(double omega_rad_s, const Eigen::Vector3cd& gamma_cm) {
    const double k0 = omega_rad_s / si::c;
    const Eigen::Vector3d origin = Eigen::Vector3d::Zero();
    const Eigen::Matrix3cd g0 = vacuum_green(origin, origin, k0);
    const Eigen::Matrix3d im_g = g0.imag();
    const cplx proj = gamma_cm.dot(im_g.cast<cplx>() * gamma_cm);
    return 2.0 * omega_rad_s * omega_rad_s / (si::epsilon0 * si::hbar * si::c * si::c) * proj.real();
}

/// Decay rate of the emitter above the substrate, Gamma = (2 w^2 / eps0 hbar c^2) Im{g^H (G0 + Gs) g}.
inline DecayRate decay_rate(const Emitter& em, const PlasmaParams& params, const QuadratureSpec& quad = {}) {
    validate(em);
    const Eigen::Vector3cd g = em.unit_dipole();
    const Eigen::Vector3d r = em.position();
    const GreenBundle b = scattered_green_bundle(r, r, em.omega0, params, quad);
    const double k0 = em.omega0;
    const Eigen::Matrix3d im_g = b.g.imag();
    const double scattered = g.dot(im_g.cast<cplx>() * g).real();
    DecayRate out;
    out.purcell = 1.0 + 6.0 * pi / k0 * scattered;
    out.error = 6.0 * pi / k0 * 3.0 * b.error;
    if (params.omega_p_si && em.gamma_debye > 0.0) {
        const double w = em.omega0 * *params.omega_p_si;
        out.gamma_si = out.purcell * free_space_rate_si(w, em.gamma_debye * si::debye);
    }
    return out;
}

/// Dissipative and coherent couplings between two emitters, in units of the free-space rate
/// Gamma0 of a unit dipole at omega0: Gamma_ij = (6 pi / k0) g_i^H Im G(r_i, r_j) g_j and
/// g_ij = (3 pi / k0) g_i^H Re G(r_i, r_j) g_j, with G = G0 + Gs.  At coincident points the
/// divergent Re G0 is left out, so g_ii is the substrate-induced level shift.
struct CouplingRates {
    cplx gamma_ij;
    cplx g_ij;
    double error = 0.0;
};

inline CouplingRates coupling_rates(const Eigen::Vector3d& pos_i, const Eigen::Vector3d& pos_j,
                                    const Eigen::Vector3cd& gamma_i, const Eigen::Vector3cd& gamma_j, double omega0,
                                    const PlasmaParams& params, const QuadratureSpec& quad = {}) {
    if (!(pos_i.z() > 0.0 && pos_j.z() > 0.0)) throw domain_error("coupling_rates: positions must lie above the surface");
    if (!(gamma_i.norm() > 0.0 && gamma_j.norm() > 0.0)) throw domain_error("coupling_rates: dipoles must be non-zero");
    const Eigen::Vector3cd gi = gamma_i / gamma_i.norm();
    const Eigen::Vector3cd gj = gamma_j / gamma_j.norm();
    const double k0 = omega0;
    const GreenBundle b = scattered_green_bundle(pos_i, pos_j, omega0, params, quad);
    const Eigen::Matrix3cd total = vacuum_green(pos_i, pos_j, k0) + b.g;
    const Eigen::Matrix3cd im_part = total.imag().cast<cplx>();
    const Eigen::Matrix3cd re_part = total.real().cast<cplx>();
    CouplingRates out;
    out.gamma_ij = 6.0 * pi / k0 * gi.dot(im_part * gj);
    out.g_ij = 3.0 * pi / k0 * gi.dot(re_part * gj);
    out.error = 6.0 * pi / k0 * 3.0 * b.error;
    return out;
}

// ---------------------------------------------------------------------------------------
// Pumped population, time in units of 1 / Gamma, resonant drive

struct PumpConfig {
    double Omega_tilde = 0.0;  ///< Rabi frequency over decay rate
};

inline void validate(const PumpConfig& p) {
    if (!(p.Omega_tilde >= 0.0) || !std::isfinite(p.Omega_tilde)) {
        throw domain_error("PumpConfig: Omega_tilde must be finite and non-negative");
    }
}

/// Exponents of the optical Bloch relaxation, 1/2 (-3/2 +- sqrt(1/4 - 16 W^2)).
inline std::pair<cplx, cplx> rabi_eigenvalues(const PumpConfig& pump) {
    validate(pump);
    const double w = pump.Omega_tilde;
    const cplx root = std::sqrt(cplx{0.25 - 16.0 * w * w, 0.0});
    return {0.5 * (-1.5 + root), 0.5 * (-1.5 - root)};
}

inline double steady_state_population(const PumpConfig& pump) {
    validate(pump);
    const double w2 = pump.Omega_tilde * pump.Omega_tilde;
    if (std::isinf(w2)) return 0.5;
    return 4.0 * w2 / (1.0 + 8.0 * w2);
}

/// Excited-state population starting from the excited state.
///
/// Written as rho_ss + [h(l1) - h(l2)] / (l1 - l2) with h(l) = (l + 1/2 + 2 W^2 / l) exp(l t),
/// which is the closed form regrouped; when l1 and l2 nearly coincide the divided difference
/// is replaced by h'(mean).
inline double population(double t_tilde, const PumpConfig& pump) {
    validate(pump);
    if (!(t_tilde >= 0.0)) throw domain_error("population: t_tilde must be non-negative");
    const auto [l1, l2] = rabi_eigenvalues(pump);
    const double w2 = pump.Omega_tilde * pump.Omega_tilde;
    const double t = t_tilde;
    auto h = [&](cplx l) { return (l + 0.5 + 2.0 * w2 / l) * std::exp(l * t); };
    cplx transient;
    if (std::abs(l1 - l2) < 1e-6) {
        const cplx l = 0.5 * (l1 + l2);
        transient = ((1.0 - 2.0 * w2 / (l * l)) + t * (l + 0.5 + 2.0 * w2 / l)) * std::exp(l * t);
    } else {
        transient = (h(l1) - h(l2)) / (l1 - l2);
    }
    return steady_state_population(pump) + transient.real();
}

struct PopulationTrace {
    std::vector<double> t_tilde;
    std::vector<double> rho_ee;
    cplx lambda1;
    cplx lambda2;
    double rho_ss = 0.0;
};

inline PopulationTrace population_trace(const std::vector<double>& t_grid, const PumpConfig& pump) {
    PopulationTrace tr;
    std::tie(tr.lambda1, tr.lambda2) = rabi_eigenvalues(pump);
    tr.rho_ss = steady_state_population(pump);
    tr.t_tilde = t_grid;
    tr.rho_ee.reserve(t_grid.size());
    for (double t : t_grid) tr.rho_ee.push_back(population(t, pump));
    return tr;
}

// ---------------------------------------------------------------------------------------
// Laser

/// Peak gradient force |gamma_z| k0 E0 of a standing-wave (mirror) drive, in newtons.
inline double laser_gradient_force(double gamma_z_debye, double e0_v_per_m, double k0_per_m) {
    if (!(gamma_z_debye >= 0.0 && e0_v_per_m >= 0.0 && k0_per_m >= 0.0)) {
        throw domain_error("laser_gradient_force: inputs must be non-negative");
    }
    return gamma_z_debye * si::debye * k0_per_m * e0_v_per_m;
}

}  // namespace recoil
