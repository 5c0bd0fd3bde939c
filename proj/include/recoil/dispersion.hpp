#pragma once

// Quasi-static surface response of the magnetized-plasma half-space.
//
// The electrostatic potential of an evanescent sheet exp(i k.rho) exp(-k z) is matched
// across z = 0 against the solution of div(eps grad phi) = 0 in the plasma, which decays
// as exp(p k z) with p^2 = cos^2(theta) + (eps_a/eps_t) sin^2(theta).  Continuity of phi
// and of the normal displacement gives
//
//     eta(theta, omega) = eps_t p + eps_g cos(theta),     r = (eta - 1) / (eta + 1),
//
// the image-response coefficient (r -> (eps_t - 1)/(eps_t + 1) without bias).  Its pole
// eta = -1 is the SPP resonance omega_theta.

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "recoil/constants.hpp"
#include "recoil/errors.hpp"
#include "recoil/material.hpp"

namespace recoil {

/// Closed-form quasi-static SPP resonance along in-plane direction theta (omega_p units).
inline double omega_theta(double theta, const PlasmaParams& p) {
    const double wc = p.omega_c;
    const double s = std::sin(theta);
    return 0.5 * (wc * std::cos(theta) + std::sqrt(2.0 + wc * wc * (1.0 + s * s)));
}

/// d(omega_theta)/d(theta) from the closed form.
inline double omega_theta_slope(double theta, const PlasmaParams& p) {
    const double wc = p.omega_c;
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double root = std::sqrt(2.0 + wc * wc * (1.0 + s * s));
    return 0.5 * (-wc * s + wc * wc * s * c / root);
}

/// Direction theta0 in [0, pi] of the SPP launched at omega0, or nothing outside the band.
inline std::optional<double> emission_angle(double omega0, const PlasmaParams& p) {
    const double wc = p.omega_c;
    if (wc == 0.0) return std::nullopt;  // no preferred direction without bias
    const auto band = characteristic_frequencies(p);
    constexpr double edge_slack = 1e-13;
    if (omega0 < band.omega_minus - edge_slack || omega0 > band.omega_plus + edge_slack) {
        return std::nullopt;
    }
    // Squaring 2 omega0 - wc c = sqrt(2 + wc^2 (2 - c^2)) gives
    // wc^2 c^2 - 2 omega0 wc c + 2 omega0^2 - 1 - wc^2 = 0.
    const double disc = std::max(0.0, 1.0 + wc * wc - omega0 * omega0);
    const double candidates[2] = {(omega0 - std::sqrt(disc)) / wc, (omega0 + std::sqrt(disc)) / wc};
    std::optional<double> best;
    double best_res = 1e300;
    for (double c : candidates) {
        if (std::abs(c) > 1.0 + 1e-9) continue;
        c = std::clamp(c, -1.0, 1.0);
        const double res = std::abs(omega_theta(std::acos(c), p) - omega0);
        if (res < best_res) {
            best_res = res;
            best = c;
        }
    }
    if (!best || best_res > 1e-8) return std::nullopt;

    // Newton polish in cos(theta): omega(c) = (wc c + sqrt(2 + wc^2 (2 - c^2))) / 2.
    double c = *best;
    for (int it = 0; it < 3; ++it) {
        const double root = std::sqrt(2.0 + wc * wc * (2.0 - c * c));
        const double f = 0.5 * (wc * c + root) - omega0;
        const double df = 0.5 * (wc - wc * wc * c / root);
        if (df == 0.0) break;
        c = std::clamp(c - f / df, -1.0, 1.0);
    }
    return std::acos(c);
}

/// Quasi-static surface response eta(theta, omega); the SPP pole sits at eta = -1.
inline cplx surface_response(double theta, cplx omega, const PlasmaParams& p) {
    const auto eps = permittivity(omega, p);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const cplx p2 = (eps.eps_t * c * c + eps.eps_a * s * s) / eps.eps_t;
    const cplx decay = std::sqrt(p2);  // principal branch: Re >= 0, decays into z < 0
    if (std::abs(decay) == 0.0) {
        std::ostringstream os;
        os << "quasistatic_reflection: non-decaying potential at theta=" << theta << ", omega=" << omega;
        throw singular_matrix_error(os.str());
    }
    return eps.eps_t * decay + eps.eps_g * c;
}

/// Electrostatic image coefficient of the half-space for in-plane direction theta.
inline cplx quasistatic_reflection(double theta, cplx omega, const PlasmaParams& p) {
    const cplx eta = surface_response(theta, omega, p);
    if (std::abs(eta + 1.0) == 0.0) {
        std::ostringstream os;
        os << "quasistatic_reflection: boundary matching singular at theta=" << theta << ", omega=" << omega;
        throw singular_matrix_error(os.str());
    }
    return (eta - 1.0) / (eta + 1.0);
}

inline cplx quasistatic_reflection(double theta, double omega, const PlasmaParams& p) {
    return quasistatic_reflection(theta, cplx{omega, 0.0}, p);
}

/// Residue of the lossless quasi-static reflection in omega at its pole omega_theta.
///
/// r ~ res / (omega - omega_theta); extracted from the slope of 1/r, which has a simple
/// zero at the pole.  |res| equals omega_theta * a_theta of the residue force formula.
inline double quasistatic_residue(double theta, const PlasmaParams& p, double step = 1e-6) {
    const PlasmaParams lossless = p.lossless();
    const double w = omega_theta(theta, lossless);
    auto inv_r = [&](double omega) {
        const cplx eta = surface_response(theta, cplx{omega, 0.0}, lossless);
        return ((eta + 1.0) / (eta - 1.0)).real();
    };
    const double slope = (inv_r(w + step) - inv_r(w - step)) / (2.0 * step);
    if (slope == 0.0) throw singular_matrix_error("quasistatic_residue: vanishing slope of 1/r at the pole");
    return 1.0 / slope;
}

}  // namespace recoil
