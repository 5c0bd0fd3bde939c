#pragma once

// Magnetized-plasma (gyrotropic) permittivity with the static bias along +y.
//
// Normalized units: frequencies in omega_p, lengths in c/omega_p; omega_p_si only
// converts results to SI.
// Time convention exp(-i omega t): passive loss shows up as Im(eps) > 0.

#include <Eigen/Core>
#include <cmath>
#include <optional>
#include <sstream>

#include "recoil/constants.hpp"
#include "recoil/errors.hpp"

namespace recoil {

struct PlasmaParams {
    double omega_c = 0.0;      ///< signed cyclotron frequency / omega_p; sign = bias along +-y
    double gamma_damp = 0.015; ///< collision rate / omega_p
    std::optional<double> omega_p_si;  ///< plasma frequency in rad/s; enables SI output

    [[nodiscard]] PlasmaParams flipped_bias() const { return {-omega_c, gamma_damp, omega_p_si}; }
    [[nodiscard]] PlasmaParams lossless() const { return {omega_c, 0.0, omega_p_si}; }
    /// Length unit c / omega_p in metres, when the SI scale is known.
    [[nodiscard]] std::optional<double> length_unit_m() const {
        if (!omega_p_si) return std::nullopt;
        return si::c / *omega_p_si;
    }
};

inline void validate(const PlasmaParams& p) {
    if (p.omega_p_si && !(*p.omega_p_si > 0.0)) throw domain_error("PlasmaParams: omega_p_si must be positive");
    if (!(p.gamma_damp >= 0.0)) throw domain_error("PlasmaParams: gamma_damp must be non-negative");
    if (!std::isfinite(p.omega_c)) throw domain_error("PlasmaParams: omega_c must be finite");
}

/// Components of eps / eps0 = eps_t I_t + eps_a yy + i eps_g (y x I).
struct PermittivityValues {
    cplx eps_t;
    cplx eps_a;
    cplx eps_g;
    /// eps_a - eps_t evaluated without cancellation (vanishes as omega_c^2).
    cplx anisotropy;
};

/// Permittivity components at (possibly complex) normalized frequency omega.
inline PermittivityValues permittivity(cplx omega, const PlasmaParams& p) {
    if (omega == cplx{0.0, 0.0}) throw domain_error("permittivity: omega must be non-zero");
    const cplx u = omega + I * p.gamma_damp;  // omega + i Gamma
    const double wc = p.omega_c;
    const cplx cyclo = u * u - wc * wc;
    if (std::abs(cyclo) == 0.0 || std::abs(u) == 0.0) {
        std::ostringstream os;
        os << "permittivity: cyclotron resonance at omega=" << omega;
        throw domain_error(os.str());
    }
    PermittivityValues v;
    // (1 + i Gamma/omega) = u / omega
    v.eps_t = 1.0 - u / (omega * cyclo);
    v.eps_a = 1.0 - 1.0 / (omega * u);
    v.eps_g = -wc / (omega * cyclo);
    v.anisotropy = wc * wc / (omega * u * cyclo);
    return v;
}

inline PermittivityValues permittivity(double omega, const PlasmaParams& p) {
    return permittivity(cplx{omega, 0.0}, p);
}

/// Full tensor in the Cartesian (x, y, z) basis, in units of eps0.
inline Eigen::Matrix3cd permittivity_tensor(cplx omega, const PlasmaParams& p) {
    const auto v = permittivity(omega, p);
    Eigen::Matrix3cd eps = Eigen::Matrix3cd::Zero();
    eps(0, 0) = v.eps_t;
    eps(1, 1) = v.eps_a;
    eps(2, 2) = v.eps_t;
    // y x v = (v_z, 0, -v_x)
    eps(0, 2) = I * v.eps_g;
    eps(2, 0) = -I * v.eps_g;
    return eps;
}

inline Eigen::Matrix3cd permittivity_tensor(double omega, const PlasmaParams& p) {
    return permittivity_tensor(cplx{omega, 0.0}, p);
}

struct BandEdges {
    double omega_spp;
    double omega_minus;
    double omega_plus;
};

/// Quasi-static SPP band [omega_minus, omega_plus] and the unbiased resonance omega_p/sqrt(2).
inline BandEdges characteristic_frequencies(const PlasmaParams& p) {
    const double wc = p.omega_c;
    const double root = std::sqrt(2.0 + wc * wc);
    const double along_x = 0.5 * (wc + root);   // theta = 0
    const double against_x = 0.5 * (-wc + root);  // theta = pi
    return {1.0 / std::sqrt(2.0), std::min(along_x, against_x), std::max(along_x, against_x)};
}

/// InSb numbers quoted for a magnetized-plasma substrate: omega_p ~ 31 THz and
/// omega_c rising linearly from 8 THz at 1 T to 40 THz at 5 T.
/// Frequencies are read as angular (10^12 rad/s).
struct InSb {
    static constexpr double omega_p_thz = 31.0;
    static constexpr double omega_c_thz_per_tesla = 8.0;

    /// Normalized omega_c / omega_p for a bias of `tesla` (sign follows the field along y).
    static constexpr double normalized_cyclotron(double tesla) {
        return omega_c_thz_per_tesla * tesla / omega_p_thz;
    }
    static constexpr double omega_p_rad_s() { return omega_p_thz * 1e12; }
};

}  // namespace recoil
