#pragma once

// Dyadic Green function of the vacuum half-space above the gyrotropic substrate.
//
// Convention: the field of a point dipole p at r' is E(r) = (k0^2 / eps0) G(r, r') p, with
// G in inverse length.  The reflected part is the angular-spectrum (Weyl) expansion
//
//   G_s(r, r') = (i k0 / 8 pi^2) Int q dq dtheta / kz  sum R_{ab} e_a(+) e_b(-)^T
//                exp(i k0 [q khat.(rho - rho') + kz (z + z')])
//
// with the unnormalized vacuum polarizations of modes.hpp.  The radial integral is split
// at the light line: q = sin(t) on the propagating part and q = cosh(u) on the evanescent
// part, which removes the 1/kz singularity.  The evanescent range is cut off at k0 q =
// Lambda / zbar with zbar the mean height, so the neglected tail is ~ exp(-2 Lambda).

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "recoil/constants.hpp"
#include "recoil/dispersion.hpp"
#include "recoil/errors.hpp"
#include "recoil/material.hpp"
#include "recoil/modes.hpp"
#include "recoil/quadrature.hpp"

namespace recoil {

struct QuadratureSpec {
    double cutoff = 30.0;            ///< Lambda: evanescent cutoff in units of 1 / zbar
    double rel_tol = 1e-6;           ///< relative tolerance of the outer (radial) integral
    std::size_t max_panels = 400;    ///< radial panel budget
    std::size_t max_inner_panels = 200;
    bool strict = true;              ///< throw quadrature_error instead of flagging non-convergence
};

inline void validate(const QuadratureSpec& q) {
    if (!(q.cutoff >= 10.0)) throw domain_error("QuadratureSpec: cutoff must be >= 10");
    if (!(q.rel_tol > 0.0 && q.rel_tol <= 1e-2)) throw domain_error("QuadratureSpec: rel_tol must lie in (0, 1e-2]");
    if (q.max_panels < 2 || q.max_inner_panels < 4) throw domain_error("QuadratureSpec: panel budgets too small");
}

/// Reflected Green tensor with its lateral gradients with respect to the observation point.
struct GreenBundle {
    Eigen::Matrix3cd g = Eigen::Matrix3cd::Zero();
    Eigen::Matrix3cd dgx = Eigen::Matrix3cd::Zero();  ///< d/dx_obs
    Eigen::Matrix3cd dgy = Eigen::Matrix3cd::Zero();  ///< d/dy_obs
    double error = 0.0;       ///< absolute error estimate on g (max entry)
    double grad_error = 0.0;  ///< absolute error estimate on the gradients (max entry)
    bool converged = true;
    std::size_t evaluations = 0;
};

/// Free-space dyadic Green function between distinct points.  For coincident points the
/// divergent real part is dropped and Im G0 = k0 / (6 pi) I is returned.
inline Eigen::Matrix3cd vacuum_green(const Eigen::Vector3d& r1, const Eigen::Vector3d& r2, double k0) {
    const Eigen::Vector3d sep = r1 - r2;
    const double r = sep.norm();
    if (r == 0.0) return Eigen::Matrix3cd::Identity() * cplx{0.0, k0 / (6.0 * pi)};
    const Eigen::Vector3d u = sep / r;
    const double kr = k0 * r;
    const cplx phase = std::exp(I * kr) / (4.0 * pi * r);
    const cplx a = 1.0 + (I * kr - 1.0) / (kr * kr);
    const cplx b = (3.0 - 3.0 * I * kr - kr * kr) / (kr * kr);
    Eigen::Matrix3cd g = a * Eigen::Matrix3cd::Identity();
    g += b * (u * u.transpose()).cast<cplx>();
    return phase * g;
}

namespace detail {

using Packed = Eigen::Matrix<cplx, 27, 1>;

struct GreenIntegrand {
    PermittivityValues eps;
    double k0;
    double zsum;
    double dx;
    double dy;
    double len;  ///< gradient scale so all 27 entries share one magnitude

    /// Angular integrand at radial point (q, kz) with radial Jacobian `jac`.
    Packed operator()(double q, cplx kz, cplx jac, double theta) const {
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const double kx = q * c;
        const double ky = q * s;
        SpectralPoint sp = medium_modes(kx, ky, eps);
        sp.kz_vacuum = kz;  // exact value from the substitution
        const Eigen::Matrix2cd r = reflection_matrix(sp);
        const VacuumBasis b = vacuum_basis(kx, ky, kz);
        Eigen::Matrix<cplx, 3, 2> up;
        up << b.s, b.p_up;
        Eigen::Matrix<cplx, 3, 2> down;
        down << b.s, b.p_down;
        const cplx weight = I * k0 / (8.0 * pi * pi) * jac *
                            std::exp(I * k0 * (q * (c * dx + s * dy) + kz * zsum));
        const Eigen::Matrix3cd t = weight * (up * r * down.transpose());
        Packed out;
        const cplx gx = I * k0 * q * c * len;
        const cplx gy = I * k0 * q * s * len;
        for (int j = 0; j < 3; ++j) {
            for (int i = 0; i < 3; ++i) {
                out(3 * j + i) = t(i, j);
                out(9 + 3 * j + i) = gx * t(i, j);
                out(18 + 3 * j + i) = gy * t(i, j);
            }
        }
        return out;
    }
};

}  // namespace detail

/// Reflected Green tensor G_s(r_obs, r_src) and its lateral gradients; heights z > 0.
inline GreenBundle scattered_green_bundle(const Eigen::Vector3d& r_obs, const Eigen::Vector3d& r_src, double omega,
                                          const PlasmaParams& params, const QuadratureSpec& spec = {}) {
    validate(params);
    validate(spec);
    if (!(omega > 0.0)) throw domain_error("scattered_green: omega must be positive");
    if (!(r_obs.z() > 0.0 && r_src.z() > 0.0)) throw domain_error("scattered_green: points must lie above the surface");

    detail::GreenIntegrand f{permittivity(omega, params), omega, r_obs.z() + r_src.z(), r_obs.x() - r_src.x(),
                             r_obs.y() - r_src.y(), 0.5 * (r_obs.z() + r_src.z())};
    const double k0 = omega;
    const double zbar = f.len;

    // Angular panels: quarter turns plus the quasi-static launch directions.
    std::vector<double> angle_breaks{-pi, -0.5 * pi, 0.0, 0.5 * pi, pi};
    if (auto th = emission_angle(omega, params)) {
        for (double a : {*th, -*th}) {
            if (std::abs(std::abs(a) - pi) > 1e-9 && std::abs(a) > 1e-9) angle_breaks.push_back(a);
        }
    }
    std::sort(angle_breaks.begin(), angle_breaks.end());
    angle_breaks.erase(std::unique(angle_breaks.begin(), angle_breaks.end(),
                                   [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                       angle_breaks.end());

    quad::Options inner_opt{0.1 * spec.rel_tol, 0.0, spec.max_inner_panels};
    bool inner_ok = true;
    double inner_worst = 0.0;  // largest inner error estimate over outer nodes of the current stage
    std::size_t evals = 0;
    auto angular = [&](double q, cplx kz, cplx jac) {
        auto res = quad::integrate([&](double th) { return f(q, kz, jac, th); },
                                   std::span<const double>(angle_breaks), inner_opt);
        inner_ok = inner_ok && res.converged;
        inner_worst = std::max(inner_worst, res.error);
        evals += res.evaluations;
        return res.value;
    };

    quad::Options outer_opt{spec.rel_tol, 0.0, spec.max_panels};

    // Propagating part, q = sin t.
    auto prop = quad::integrate(
        [&](double t) { return angular(std::sin(t), cplx{std::cos(t), 0.0}, cplx{std::sin(t), 0.0}); }, 0.0,
        0.5 * pi, outer_opt);
    // Inner errors propagate through the outer rule at most as (worst error) x (interval length).
    double inner_bound = inner_worst * 0.5 * pi;
    inner_worst = 0.0;

    // Evanescent part, q = cosh u, kz = i sinh u, q dq / kz = -i cosh u du.
    const double q_max = spec.cutoff / (k0 * zbar);
    detail::Packed evan_value = detail::Packed::Zero();
    double evan_error = 0.0;
    bool evan_ok = true;
    if (q_max > 1.0) {
        const double u_max = std::acosh(q_max);
        std::vector<double> ubreaks{0.0};
        const double q_char = 1.0 / (k0 * zbar);
        for (double qb : {2.0, 0.25 * q_char, q_char, 4.0 * q_char, 10.0 * q_char}) {
            if (qb > 1.0 && qb < q_max) ubreaks.push_back(std::acosh(qb));
        }
        ubreaks.push_back(u_max);
        std::sort(ubreaks.begin(), ubreaks.end());
        ubreaks.erase(std::unique(ubreaks.begin(), ubreaks.end()), ubreaks.end());
        auto evan = quad::integrate(
            [&](double u) { return angular(std::cosh(u), cplx{0.0, std::sinh(u)}, cplx{0.0, -std::cosh(u)}); },
            std::span<const double>(ubreaks), outer_opt);
        evan_value = evan.value;
        evan_error = evan.error;
        evan_ok = evan.converged;
        inner_bound += inner_worst * u_max;
    }

    const detail::Packed total = prop.value + evan_value;
    GreenBundle out;
    for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 3; ++i) {
            out.g(i, j) = total(3 * j + i);
            out.dgx(i, j) = total(9 + 3 * j + i) / f.len;
            out.dgy(i, j) = total(18 + 3 * j + i) / f.len;
        }
    }
    // Inner integrals run ten times tighter; fold their budget into the estimate.  An inner
    // integral that stalls (angular cancellation at some q) is harmless when its bounded
    // contribution still fits the outer tolerance.
    const double scale = quad::magnitude(total);
    const double inner_share = std::max(inner_opt.rel_tol * scale, inner_bound);
    out.error = prop.error + evan_error + inner_share;
    out.grad_error = out.error / f.len;
    out.converged = prop.converged && evan_ok && (inner_ok || inner_bound <= spec.rel_tol * scale);
    out.evaluations = evals;
    if (!out.converged && spec.strict) {
        std::ostringstream os;
        os << "scattered_green: quadrature did not converge (achieved abs error " << out.error << " on |G| ~ "
           << quad::magnitude(total) << ", rel_tol " << spec.rel_tol << ")";
        throw quadrature_error(os.str());
    }
    return out;
}

/// Reflected Green tensor G_s(r_obs, r_src).
inline Eigen::Matrix3cd scattered_green(const Eigen::Vector3d& r_obs, const Eigen::Vector3d& r_src, double omega,
                                        const PlasmaParams& params, const QuadratureSpec& spec = {}) {
    return scattered_green_bundle(r_obs, r_src, omega, params, spec).g;
}

/// d G_s / d x_alpha at coincident points (the gradient acts on the observation point).
inline Eigen::Matrix3cd lateral_green_derivative(const Eigen::Vector3d& r, int alpha, double omega,
                                                 const PlasmaParams& params, const QuadratureSpec& spec = {}) {
    if (alpha != 0 && alpha != 1) throw domain_error("lateral_green_derivative: alpha must be 0 (x) or 1 (y)");
    const auto b = scattered_green_bundle(r, r, omega, params, spec);
    return alpha == 0 ? b.dgx : b.dgy;
}

/// Leading quasi-static (image) value of G_s at height d: the zz entry r / (16 pi k0^2 d^3)
/// for an unbiased substrate, with r the electrostatic image coefficient.
inline Eigen::Matrix3cd quasistatic_green(double d, double omega, const PlasmaParams& params) {
    if (!(d > 0.0) || !(omega > 0.0)) throw domain_error("quasistatic_green: d and omega must be positive");
    const double k0 = omega;
    // For q >> 1: kz -> i q, e(+) e(-)^T -> q^2 v conj(v)^T with v = z - i khat, and the
    // radial moment Int q^2 exp(-2 q k0 d) dq = 1 / (4 k0^3 d^3).
    auto integrand = [&](double th) {
        const Eigen::Vector3cd v(-I * std::cos(th), -I * std::sin(th), 1.0);
        const cplx r = quasistatic_reflection(th, omega, params);
        Eigen::Matrix<cplx, 9, 1> out;
        const Eigen::Matrix3cd m = r * (v * v.conjugate().transpose());
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i) out(3 * j + i) = m(i, j);
        return out;
    };
    const auto res = quad::integrate(integrand, -pi, pi, {1e-10, 0.0, 2000});
    Eigen::Matrix3cd g;
    const double pref = 1.0 / (32.0 * pi * pi * k0 * k0 * d * d * d);
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) g(i, j) = pref * res.value(3 * j + i);
    return g;
}

}  // namespace recoil
