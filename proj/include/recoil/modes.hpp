#pragma once

// Plane-wave modes of the gyrotropic half-space z < 0 and the vacuum above it, and the
// 2x2 polarization-resolved reflection matrix obtained by tangential field matching.
//
// In-plane wavevectors are normalized to k0 = omega / c, so q = |(kx, ky)| = 1 is the
// light line.  Fields use H~ = K x E (that is eta0 H in units where k0 = 1).

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "recoil/constants.hpp"
#include "recoil/errors.hpp"
#include "recoil/material.hpp"

namespace recoil {

struct PlaneWave {
    cplx kz;
    Eigen::Vector3cd e;  ///< unit polarization (Hermitian norm)
    Eigen::Vector3cd h;  ///< K x e
};

/// Field content of one in-plane wavevector.
struct SpectralPoint {
    double kx = 0.0;
    double ky = 0.0;
    cplx kz_vacuum;                       ///< sqrt(1 - q^2), Im >= 0
    std::array<PlaneWave, 2> medium;      ///< the two modes decaying (or radiating) into z < 0
    std::array<cplx, 4> kz_roots;         ///< all four roots of the dispersion quartic
    bool isotropic = false;
};

namespace detail {

inline Eigen::Matrix3cd adjugate(const Eigen::Matrix3cd& a) {
    Eigen::Matrix3cd r;
    r(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
    r(0, 1) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
    r(0, 2) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
    r(1, 0) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
    r(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
    r(1, 2) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
    r(2, 0) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
    r(2, 1) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
    r(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    return r;
}

/// Plain (bilinear) cross product; Eigen's cross() conjugates complex results.
inline Eigen::Vector3cd cross(const Eigen::Vector3cd& a, const Eigen::Vector3cd& b) {
    return {a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0)};
}

/// Largest cross product of two rows: a null vector of a rank-2 matrix.
inline Eigen::Vector3cd null_from_rows(const Eigen::Matrix3cd& a) {
    Eigen::Vector3cd best = Eigen::Vector3cd::Zero();
    double best_norm = -1.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            const Eigen::Vector3cd v = cross(a.row(i).transpose(), a.row(j).transpose());
            const double n = v.norm();
            if (n > best_norm) {
                best_norm = n;
                best = v;
            }
        }
    }
    return best;
}

/// Downward Poynting flux Re(e x conj(h))_z of a unit-amplitude wave.
inline double flux_z(const Eigen::Vector3cd& e, const Eigen::Vector3cd& h) {
    return (e(0) * std::conj(h(1)) - e(1) * std::conj(h(0))).real();
}

/// Picks the sign of kz for a wave leaving the interface into z < 0.
/// Evanescent: Im kz < 0.  Propagating (lossless): energy flux points down.
template <class Build>
PlaneWave downward(cplx kz, Build&& build) {
    if (std::abs(kz.imag()) > 1e-14 * std::abs(kz)) {
        if (kz.imag() > 0.0) kz = -kz;
        return build(kz);
    }
    PlaneWave w = build(cplx{std::abs(kz.real()), 0.0});
    if (flux_z(w.e, w.h) > 0.0) w = build(cplx{-std::abs(kz.real()), 0.0});
    return w;
}

}  // namespace detail

/// Vacuum normal wavenumber sqrt(1 - q^2) on the branch with Im >= 0 (Re >= 0 when real).
inline cplx vacuum_kz(double q) {
    cplx kz = std::sqrt(cplx{1.0 - q * q, 0.0});
    if (kz.imag() < 0.0 || (kz.imag() == 0.0 && kz.real() < 0.0)) kz = -kz;
    return kz;
}

/// The two half-space modes for in-plane wavevector (kx, ky) in units of k0.
///
/// With mu = n^2 - eps_t the determinant of n^2 - nn - eps is biquadratic in kz and
/// mu solves eps_t mu^2 + 2 eps_t X mu + ... = 0 with a discriminant written so that no
/// O(q^2) cancellation occurs.  Polarizations come from adj(eps - n^2 + KK) applied to K.
inline SpectralPoint medium_modes(double kx, double ky, const PermittivityValues& eps) {
    const cplx et = eps.eps_t;
    const cplx eg = eps.eps_g;
    const cplx d = eps.anisotropy;
    const double q2 = kx * kx + ky * ky;
    const double ky2 = ky * ky;

    SpectralPoint sp;
    sp.kx = kx;
    sp.ky = ky;
    sp.kz_vacuum = vacuum_kz(std::sqrt(q2));

    if (std::abs(eg) < 1e-10) {
        sp.isotropic = true;
        const cplx kz0 = std::sqrt(et - q2);
        const double q = std::sqrt(q2);
        const Eigen::Vector3cd s = q > 0.0 ? Eigen::Vector3cd(-ky / q, kx / q, 0.0) : Eigen::Vector3cd(0.0, 1.0, 0.0);
        auto build_s = [&](cplx kz) {
            const Eigen::Vector3cd k(kx, ky, kz);
            return PlaneWave{kz, s, detail::cross(k, s)};
        };
        auto build_p = [&](cplx kz) {
            const Eigen::Vector3cd k(kx, ky, kz);
            Eigen::Vector3cd p = detail::cross(k, s);
            p /= p.norm();
            return PlaneWave{kz, p, detail::cross(k, p)};
        };
        sp.medium[0] = detail::downward(kz0, build_s);
        sp.medium[1] = detail::downward(kz0, build_p);
        sp.kz_roots = {kz0, -kz0, kz0, -kz0};
        return sp;
    }

    const cplx a = et - ky2;
    const cplx disc =
        d * d * a * a + eg * eg * eg * eg + 2.0 * eg * eg * (d * (et + ky2) + 2.0 * et * ky2);
    const cplx root = std::sqrt(disc);
    const cplx x = (d * (ky2 - et) + eg * eg) / (2.0 * et);
    const cplx mus[2] = {-x - root / (2.0 * et), -x + root / (2.0 * et)};

    for (int m = 0; m < 2; ++m) {
        const cplx mu = mus[m];
        Eigen::Matrix3cd amat = Eigen::Matrix3cd::Zero();
        amat(0, 0) = -mu;
        amat(1, 1) = d - mu;
        amat(2, 2) = -mu;
        amat(0, 2) = I * eg;
        amat(2, 0) = -I * eg;
        const Eigen::Matrix3cd adj = detail::adjugate(amat);
        auto build = [&](cplx kz) {
            const Eigen::Vector3cd k(kx, ky, kz);
            Eigen::Vector3cd v = adj * k;
            if (v.norm() < 1e-8 * adj.norm() * k.norm()) v = detail::null_from_rows(amat);
            const double n = v.norm();
            if (n == 0.0) {
                std::ostringstream os;
                os << "medium_modes: no polarization vector at kx=" << kx << ", ky=" << ky;
                throw degenerate_mode_error(os.str());
            }
            v /= n;
            return PlaneWave{kz, v, detail::cross(k, v)};
        };
        const cplx kz0 = std::sqrt(et - q2 + mu);
        sp.medium[m] = detail::downward(kz0, build);
        sp.kz_roots[2 * m] = kz0;
        sp.kz_roots[2 * m + 1] = -kz0;
    }

    // kz1 ~ kz2 ~ -i q at large q for any pair of modes, so coincidence is judged on mu.
    // Both polarizations also turn quasi-longitudinal there; only a true double root
    // (coincident mu and parallel fields) is rejected.
    const double overlap = std::abs(sp.medium[0].e.dot(sp.medium[1].e));
    if (std::abs(mus[0] - mus[1]) <= 1e-8 * std::max(std::abs(mus[0]), std::abs(mus[1])) && overlap > 1.0 - 1e-8) {
        std::ostringstream os;
        os << "medium_modes: degenerate roots kz=" << sp.medium[0].kz << " at kx=" << kx << ", ky=" << ky;
        throw degenerate_mode_error(os.str());
    }
    return sp;
}

/// Quartic roots and downward modes for wavevector (kx, ky) in units of omega/c.
inline SpectralPoint gyrotropic_kz_modes(double kx, double ky, double omega, const PlasmaParams& p) {
    return medium_modes(kx, ky, permittivity(omega, p));
}

/// Unit vacuum polarizations: s = z x k^, p(+-) = -+kz k^ + q z for waves going up (+) or down (-).
struct VacuumBasis {
    Eigen::Vector3cd s;
    Eigen::Vector3cd p_up;
    Eigen::Vector3cd p_down;
    Eigen::Vector3cd k_up;
    Eigen::Vector3cd k_down;
};

inline VacuumBasis vacuum_basis(double kx, double ky, cplx kz) {
    const double q = std::hypot(kx, ky);
    VacuumBasis b;
    const double cx = q > 0.0 ? kx / q : 1.0;
    const double cy = q > 0.0 ? ky / q : 0.0;
    b.s = Eigen::Vector3cd(-cy, cx, 0.0);
    b.p_up = Eigen::Vector3cd(-kz * cx, -kz * cy, q);
    b.p_down = Eigen::Vector3cd(kz * cx, kz * cy, q);
    b.k_up = Eigen::Vector3cd(kx, ky, kz);
    b.k_down = Eigen::Vector3cd(kx, ky, -kz);
    return b;
}

/// Reflection matrix R with columns (s, p) incident and rows (s, p) reflected.
///
/// Tangential E and H~ of incident + reflected equal those of the two transmitted modes.
inline Eigen::Matrix2cd reflection_matrix(const SpectralPoint& sp) {
    const VacuumBasis b = vacuum_basis(sp.kx, sp.ky, sp.kz_vacuum);
    auto tangential = [](const Eigen::Vector3cd& e, const Eigen::Vector3cd& h) {
        return Eigen::Vector4cd(e(0), e(1), h(0), h(1));
    };
    Eigen::Matrix4cd m;
    m.col(0) = tangential(b.s, detail::cross(b.k_up, b.s));
    m.col(1) = tangential(b.p_up, detail::cross(b.k_up, b.p_up));
    m.col(2) = -tangential(sp.medium[0].e, sp.medium[0].h);
    m.col(3) = -tangential(sp.medium[1].e, sp.medium[1].h);

    Eigen::Matrix<cplx, 4, 2> rhs;
    rhs.col(0) = -tangential(b.s, detail::cross(b.k_down, b.s));
    rhs.col(1) = -tangential(b.p_down, detail::cross(b.k_down, b.p_down));

    const Eigen::PartialPivLU<Eigen::Matrix4cd> lu(m);
    if (!(lu.rcond() > 1e-15)) {
        std::ostringstream os;
        os << "reflection_matrix: singular boundary system at kx=" << sp.kx << ", ky=" << sp.ky;
        throw singular_matrix_error(os.str());
    }
    const Eigen::Matrix<cplx, 4, 2> x = lu.solve(rhs);
    return x.topRows<2>();
}

inline Eigen::Matrix2cd reflection_matrix(double kx, double ky, double omega, const PlasmaParams& p) {
    return reflection_matrix(gyrotropic_kz_modes(kx, ky, omega, p));
}

/// Bound-mode condition for real in-plane wavevectors of a lossless half-space.
///
/// det(i (Y_vac - Y_med)) with surface admittances Y mapping tangential E to z x H~.  For
/// q > 1 and both medium modes evanescent the matrix is Hermitian, so the value is real
/// and changes sign at a guided mode.  Its poles (singular medium admittance) also flip
/// the sign; root finders must reject those.
struct PoleSample {
    double value = 0.0;
    bool valid = false;
};

inline PoleSample pole_function(double kx, double ky, const PermittivityValues& lossless_eps) {
    const double q = std::hypot(kx, ky);
    PoleSample out;
    if (!(q > 1.0)) return out;
    SpectralPoint sp;
    try {
        sp = medium_modes(kx, ky, lossless_eps);
    } catch (const degenerate_mode_error&) {
        return out;
    }
    for (const auto& w : sp.medium) {
        if (!(w.kz.imag() < -1e-12 * std::max(1.0, std::abs(w.kz)))) return out;
    }
    const VacuumBasis b = vacuum_basis(kx, ky, sp.kz_vacuum);
    auto admittance = [](const Eigen::Vector3cd& e1, const Eigen::Vector3cd& h1, const Eigen::Vector3cd& e2,
                         const Eigen::Vector3cd& h2, bool& ok) {
        Eigen::Matrix2cd a;
        a << e1(0), e2(0), e1(1), e2(1);
        Eigen::Matrix2cd bm;
        bm << -h1(1), -h2(1), h1(0), h2(0);
        const cplx det = a.determinant();
        ok = std::abs(det) > 1e-300;
        return ok ? Eigen::Matrix2cd(bm * a.inverse()) : Eigen::Matrix2cd(Eigen::Matrix2cd::Zero());
    };
    bool ok_v = false;
    bool ok_m = false;
    const Eigen::Matrix2cd yv = admittance(b.s, detail::cross(b.k_up, b.s), b.p_up, detail::cross(b.k_up, b.p_up), ok_v);
    const Eigen::Matrix2cd ym =
        admittance(sp.medium[0].e, sp.medium[0].h, sp.medium[1].e, sp.medium[1].h, ok_m);
    if (!ok_v || !ok_m) return out;
    const cplx det = (I * (yv - ym)).determinant();
    out.value = det.real();
    out.valid = std::isfinite(out.value);
    return out;
}

}  // namespace recoil
