#pragma once

// Lateral recoil force on an emitter above the biased plasma.
//
// All paths report F~ = F / F0 with F0 = 3 |gamma|^2 / (16 pi eps0 d^4):
//
//  * exact: F = 2 (k0^2 / eps0) Re{gamma^H dG_s/dx_a gamma}, i.e.
//    F~_a = (32 pi / 3) k0^2 d^4 Re{g^H dG_s/dx_a g} for the unit dipole g;
//  * quasi-static integral: the large-q limit of the same expression, where the radial
//    moment is analytic and F~_a = -(1/2 pi) Int Im r(theta) khat_a W(theta) dtheta with
//    W = |g^H (z - i khat)|^2;
//  * quasi-static residue: the lossless limit of the integral, in which Im r collapses on
//    the SPP pole and only the launch directions +-theta0 contribute;
//  * weak bias: closed form of the residue path to first order in omega_c.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "recoil/constants.hpp"
#include "recoil/dispersion.hpp"
#include "recoil/dynamics.hpp"
#include "recoil/errors.hpp"
#include "recoil/greens.hpp"
#include "recoil/material.hpp"
#include "recoil/quadrature.hpp"

namespace recoil {

enum class ForcePath { exact, quasistatic_integral, quasistatic_residue, weak_bias };

inline std::string_view to_string(ForcePath p) {
    switch (p) {
        case ForcePath::exact: return "exact";
        case ForcePath::quasistatic_integral: return "quasistatic-integral";
        case ForcePath::quasistatic_residue: return "quasistatic-residue";
        case ForcePath::weak_bias: return "weak-bias";
    }
    return "exact";
}

inline std::optional<ForcePath> parse_force_path(std::string_view s) {
    for (auto p : {ForcePath::exact, ForcePath::quasistatic_integral, ForcePath::quasistatic_residue,
                   ForcePath::weak_bias}) {
        if (s == to_string(p)) return p;
    }
    return std::nullopt;
}

struct ForceResult {
    double F_tilde_x = 0.0;
    double F_tilde_y = 0.0;
    std::optional<double> F0_SI;  ///< newtons, when omega_p_si and gamma_debye are known
    double err_estimate = 0.0;    ///< absolute, in units of F0
    ForcePath path = ForcePath::exact;
};

/// F0 = 3 |gamma|^2 / (16 pi eps0 d^4) in newtons.
inline double force_unit_si(double gamma_cm, double d_m) {
    return 3.0 * gamma_cm * gamma_cm / (16.0 * pi * si::epsilon0 * std::pow(d_m, 4));
}

/// F0 in piconewtons for a dipole in debye at a height in nanometres.
inline double force_normalization(double gamma_debye, double d_nm) {
    if (!(gamma_debye > 0.0) || !(d_nm > 0.0)) throw domain_error("force_normalization: inputs must be positive");
    return force_unit_si(gamma_debye * si::debye, d_nm * si::nanometre) / si::piconewton;
}

namespace detail {

inline std::optional<double> si_force_unit(const Emitter& em, const PlasmaParams& p) {
    const auto len = p.length_unit_m();
    if (!len || !(em.gamma_debye > 0.0)) return std::nullopt;
    return force_unit_si(em.gamma_debye * si::debye, em.d * *len);
}

/// |g^H (z - i khat(theta))|^2: weight of the dipole's evanescent field along theta.
inline double orientation_weight(const Eigen::Vector3cd& g, double theta) {
    const Eigen::Vector3cd v(-I * std::cos(theta), -I * std::sin(theta), 1.0);
    return std::norm(g.dot(v));
}

}  // namespace detail

/// Exact recoil force from the spectral Green function (excited emitter).
inline ForceResult resonant_force(const Emitter& em, const PlasmaParams& params, const QuadratureSpec& quad = {}) {
    validate(em);
    validate(params);
    if (!(params.gamma_damp > 0.0)) throw domain_error("resonant_force: gamma_damp must be positive");
    const Eigen::Vector3cd g = em.unit_dipole();
    const Eigen::Vector3d r = em.position();
    const GreenBundle b = scattered_green_bundle(r, r, em.omega0, params, quad);
    const double k0 = em.omega0;
    const double scale = 32.0 * pi / 3.0 * k0 * k0 * std::pow(em.d, 4);
    ForceResult out;
    out.path = ForcePath::exact;
    out.F_tilde_x = scale * g.dot(b.dgx * g).real();
    out.F_tilde_y = scale * g.dot(b.dgy * g).real();
    out.err_estimate = scale * 3.0 * b.grad_error;
    out.F0_SI = detail::si_force_unit(em, params);
    return out;
}

/// Quasi-static force: analytic radial moment, adaptive angular integral.
inline ForceResult quasistatic_force_integral(const Emitter& em, const PlasmaParams& params) {
    validate(em);
    validate(params);
    if (!(params.gamma_damp > 0.0)) throw domain_error("quasistatic_force_integral: gamma_damp must be positive");
    const Eigen::Vector3cd g = em.unit_dipole();
    std::vector<double> breaks{-pi, -0.5 * pi, 0.0, 0.5 * pi, pi};
    if (auto th = emission_angle(em.omega0, params)) {
        if (*th > 1e-9 && *th < pi - 1e-9) {
            breaks.push_back(*th);
            breaks.push_back(-*th);
        }
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    auto integrand = [&](double th) {
        const double im_r = quasistatic_reflection(th, em.omega0, params).imag();
        const double w = detail::orientation_weight(g, th);
        return Eigen::Vector2d(im_r * std::cos(th) * w, im_r * std::sin(th) * w);
    };
    const auto res = quad::integrate(integrand, std::span<const double>(breaks), {1e-10, 1e-14, 4000});
    if (!res.converged) {
        std::ostringstream os;
        os << "quasistatic_force_integral: angular quadrature failed (error " << res.error << ")";
        throw quadrature_error(os.str());
    }
    ForceResult out;
    out.path = ForcePath::quasistatic_integral;
    out.F_tilde_x = -res.value(0) / (2.0 * pi);
    out.F_tilde_y = -res.value(1) / (2.0 * pi);
    out.err_estimate = res.error / (2.0 * pi);
    out.F0_SI = detail::si_force_unit(em, params);
    return out;
}

/// Lossless quasi-static force from the SPP pole at the launch directions +-theta0.
///
/// F~_x = -cos(theta0) |Res| / |d omega_theta / d theta| (W(theta0) + W(-theta0)) / 2 and
/// F~_y = -sin(theta0) |Res| / |d omega_theta / d theta| (W(theta0) - W(-theta0)) / 2, where
/// Res is the residue of r in omega at omega_theta (the product omega_theta a_theta) and W
/// the orientation weight (1 for a vertical dipole).
inline ForceResult quasistatic_force_residue(const Emitter& em, const PlasmaParams& params) {
    validate(em);
    validate(params);
    const auto th = emission_angle(em.omega0, params);
    if (!th) {
        std::ostringstream os;
        os << "quasistatic_force_residue: omega0=" << em.omega0 << " is outside the SPP band";
        throw domain_error(os.str());
    }
    const double slope = std::abs(omega_theta_slope(*th, params));
    if (slope < 1e-6) {
        std::ostringstream os;
        os << "quasistatic_force_residue: omega0=" << em.omega0 << " sits on a band edge (|d omega/d theta| = " << slope
           << ")";
        throw domain_error(os.str());
    }
    const double res = std::abs(quasistatic_residue(*th, params));
    const Eigen::Vector3cd g = em.unit_dipole();
    const double w_plus = detail::orientation_weight(g, *th);
    const double w_minus = detail::orientation_weight(g, -*th);
    ForceResult out;
    out.path = ForcePath::quasistatic_residue;
    out.F_tilde_x = -std::cos(*th) * res / slope * 0.5 * (w_plus + w_minus);
    out.F_tilde_y = -std::sin(*th) * res / slope * 0.5 * (w_plus - w_minus);
    // central-difference residue: relative truncation ~ step^2 times curvature
    out.err_estimate = 1e-8 * (std::abs(out.F_tilde_x) + std::abs(out.F_tilde_y));
    out.F0_SI = detail::si_force_unit(em, params);
    return out;
}

/// Weak-bias closed form F~_x = -rho (w_spp / w_c) D / sqrt((w_c/2)^2 - D^2), D = w0 - w_spp.
inline double weak_bias_force(double omega0, double omega_c, double rho_ee = 1.0) {
    if (omega_c == 0.0) throw domain_error("weak_bias_force: omega_c must be non-zero");
    const double w_spp = 1.0 / std::sqrt(2.0);
    const double delta = omega0 - w_spp;
    const double half = 0.5 * std::abs(omega_c);
    if (!(std::abs(delta) < half)) {
        std::ostringstream os;
        os << "weak_bias_force: |omega0 - omega_spp| = " << std::abs(delta) << " must be below |omega_c|/2 = " << half;
        throw domain_error(os.str());
    }
    return -rho_ee * (w_spp / omega_c) * delta / std::sqrt(half * half - delta * delta);
}

/// Dispatch on the requested path.  The weak-bias path needs only omega0 and omega_c.
inline ForceResult compute_force(ForcePath path, const Emitter& em, const PlasmaParams& params,
                                 const QuadratureSpec& quad = {}) {
    switch (path) {
        case ForcePath::exact: return resonant_force(em, params, quad);
        case ForcePath::quasistatic_integral: return quasistatic_force_integral(em, params);
        case ForcePath::quasistatic_residue: return quasistatic_force_residue(em, params);
        case ForcePath::weak_bias: {
            validate(em);
            ForceResult out;
            out.path = ForcePath::weak_bias;
            out.F_tilde_x = weak_bias_force(em.omega0, params.omega_c, 1.0);
            out.F0_SI = detail::si_force_unit(em, params);
            return out;
        }
    }
    throw domain_error("compute_force: unknown path");
}

/// Time-dependent lateral force F~_x(t) = rho_ee(t) F~_x,R for an emitter starting excited.
struct ForceTrajectory {
    ForceResult resonant;
    PopulationTrace population;
    std::vector<double> F_tilde_x;
};

inline ForceTrajectory force_trajectory(const Emitter& em, const PlasmaParams& params, const QuadratureSpec& quad,
                                        const PumpConfig& pump, const std::vector<double>& t_grid,
                                        ForcePath path = ForcePath::exact) {
    ForceTrajectory tr;
    tr.resonant = compute_force(path, em, params, quad);
    tr.population = population_trace(t_grid, pump);
    tr.F_tilde_x.reserve(t_grid.size());
    for (double rho : tr.population.rho_ee) tr.F_tilde_x.push_back(rho * tr.resonant.F_tilde_x);
    return tr;
}

}  // namespace recoil
