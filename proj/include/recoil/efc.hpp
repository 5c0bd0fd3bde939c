#pragma once

// Retarded surface-plasmon dispersion: real roots of the bound-mode condition, equifrequency
// contours with group-velocity directions, and the far-field beam pattern built from them.
//
// Everything here is lossless; gamma_damp in the parameters is ignored.

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "recoil/constants.hpp"
#include "recoil/errors.hpp"
#include "recoil/material.hpp"
#include "recoil/modes.hpp"

namespace recoil {

struct WavenumberRange {
    double q_min = 1.0 + 1e-6;  ///< in units of omega / c; must exceed the light line
    double q_max = 1e3;
    int scan_points = 400;      ///< log-spaced bracketing samples
};

inline void validate(const WavenumberRange& r) {
    if (!(r.q_min > 1.0 && r.q_max > r.q_min)) throw domain_error("WavenumberRange: need 1 < q_min < q_max");
    if (r.scan_points < 8) throw domain_error("WavenumberRange: scan_points must be >= 8");
}

namespace detail {

/// Bound-mode condition at absolute in-plane wavevector (Kx, Ky) and frequency omega.
inline PoleSample pole_at(double kx_abs, double ky_abs, double omega, const PlasmaParams& p) {
    try {
        return pole_function(kx_abs / omega, ky_abs / omega, permittivity(omega, p.lossless()));
    } catch (const domain_error&) {
        return {};  // lossless permittivity singular (cyclotron resonance)
    }
}

}  // namespace detail

/// All real SPP wavenumbers q (units of omega / c) along theta, ascending.
inline std::vector<double> spp_wavenumbers_exact(double theta, double omega, const PlasmaParams& params,
                                                 const WavenumberRange& range = {}) {
    validate(range);
    if (!(omega > 0.0)) throw domain_error("spp_wavenumber_exact: omega must be positive");
    const auto eps = permittivity(omega, params.lossless());
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    auto f = [&](double q) { return pole_function(q * c, q * s, eps); };

    const int n = range.scan_points;
    const double log_lo = std::log(range.q_min);
    const double step = (std::log(range.q_max) - log_lo) / (n - 1);
    std::vector<double> qs(n);
    std::vector<PoleSample> fs(n);
    for (int i = 0; i < n; ++i) {
        qs[i] = std::exp(log_lo + step * i);
        fs[i] = f(qs[i]);
    }

    std::vector<double> roots;
    for (int i = 0; i + 1 < n; ++i) {
        if (!fs[i].valid || !fs[i + 1].valid) continue;
        const double fa = fs[i].value;
        const double fb = fs[i + 1].value;
        if (fa == 0.0) {
            roots.push_back(qs[i]);
            continue;
        }
        if ((fa < 0.0) == (fb < 0.0)) continue;

        std::uintmax_t iters = 200;
        bool broken = false;
        auto g = [&](double q) {
            const PoleSample v = f(q);
            if (!v.valid) broken = true;
            return v.valid ? v.value : std::numeric_limits<double>::quiet_NaN();
        };
        std::pair<double, double> bracket;
        try {
            bracket = boost::math::tools::toms748_solve(
                g, qs[i], qs[i + 1], fa, fb,
                [](double a, double b) { return std::abs(b - a) <= 1e-10 * std::min(std::abs(a), std::abs(b)); },
                iters);
        } catch (const std::exception& ex) {
            broken = true;
        }
        if (broken || iters >= 200) {
            std::ostringstream os;
            os << "spp_wavenumber_exact: polish failed in [" << qs[i] << ", " << qs[i + 1] << "] (f = " << fa << ", "
               << fb << ") at theta=" << theta << ", omega=" << omega << " after " << iters << " iterations";
            throw root_finding_error(os.str());
        }
        const double root = 0.5 * (bracket.first + bracket.second);
        // A sign flip through a pole of the medium admittance polishes to a huge |f|.
        const PoleSample at = f(root);
        if (at.valid && std::abs(at.value) <= std::max(std::abs(fa), std::abs(fb))) roots.push_back(root);
    }
    return roots;
}

/// Smallest real SPP wavenumber along theta, or nothing when no bound mode exists.
inline std::optional<double> spp_wavenumber_exact(double theta, double omega, const PlasmaParams& params,
                                                  const WavenumberRange& range = {}) {
    const auto roots = spp_wavenumbers_exact(theta, omega, params, range);
    if (roots.empty()) return std::nullopt;
    return roots.front();
}

/// Frequency of the bound mode at fixed q (units of omega / c) along theta, searched in
/// [omega_lo, omega_hi]; used to compare the large-q asymptote with omega_theta.
inline std::optional<double> spp_frequency_exact(double q, double theta, const PlasmaParams& params, double omega_lo,
                                                 double omega_hi, int scan_points = 200) {
    const auto lossless = params.lossless();
    auto f = [&](double w) { return detail::pole_at(q * w * std::cos(theta), q * w * std::sin(theta), w, lossless); };
    double prev_w = omega_lo;
    PoleSample prev = f(prev_w);
    for (int i = 1; i < scan_points; ++i) {
        const double w = omega_lo + (omega_hi - omega_lo) * i / (scan_points - 1);
        const PoleSample cur = f(w);
        if (prev.valid && cur.valid && (prev.value < 0.0) != (cur.value < 0.0)) {
            std::uintmax_t iters = 200;
            auto g = [&](double x) {
                const PoleSample v = f(x);
                return v.valid ? v.value : std::numeric_limits<double>::quiet_NaN();
            };
            const auto br = boost::math::tools::toms748_solve(
                g, prev_w, w, prev.value, cur.value,
                [](double a, double b) { return std::abs(b - a) <= 1e-12 * std::abs(a); }, iters);
            const double root = 0.5 * (br.first + br.second);
            const PoleSample at = f(root);
            if (at.valid && std::abs(at.value) <= std::max(std::abs(prev.value), std::abs(cur.value))) return root;
        }
        prev_w = w;
        prev = cur;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------------------
// Equifrequency contours

enum class EfcTopology { closed, open_hyperbolic, empty };

inline const char* to_string(EfcTopology t) {
    switch (t) {
        case EfcTopology::closed: return "closed";
        case EfcTopology::open_hyperbolic: return "open-hyperbolic";
        case EfcTopology::empty: return "empty";
    }
    return "empty";
}

struct EfcSample {
    double theta = 0.0;
    double k = 0.0;                            ///< q in units of omega / c
    Eigen::Vector2d vg_dir = Eigen::Vector2d::Zero();
    double vg_norm = 0.0;                      ///< |grad_K omega| in units of c
    int branch = 0;                            ///< 0 = smallest root along theta
    int grid_index = 0;                        ///< position of theta in the traced grid
    bool vg_checked = true;                    ///< Richardson check of the finite differences passed
};

struct EfcContour {
    double omega = 0.0;
    std::vector<EfcSample> samples;    ///< smallest root per theta, ordered by theta
    std::vector<EfcSample> branches;   ///< every root, ordered by (theta, branch)
    EfcTopology topology = EfcTopology::empty;
    bool multi_root = false;           ///< some direction carries more than one root
};

/// Group velocity grad_K omega at a contour point from the implicit function theorem,
/// derivatives of the bound-mode condition by central differences.
inline EfcSample group_velocity(double theta, double q, double omega, const PlasmaParams& params,
                                double rel_step = 1e-6) {
    const double kabs = q * omega;
    const double kx = kabs * std::cos(theta);
    const double ky = kabs * std::sin(theta);
    auto grad = [&](double h) -> std::optional<Eigen::Vector3d> {
        const double hk = h * std::max(kabs, 1.0);
        const double hw = h * omega;
        auto val = [&](double a, double b, double w) -> std::optional<double> {
            const PoleSample s = detail::pole_at(a, b, w, params);
            if (!s.valid) return std::nullopt;
            return s.value;
        };
        const auto fxp = val(kx + hk, ky, omega), fxm = val(kx - hk, ky, omega);
        const auto fyp = val(kx, ky + hk, omega), fym = val(kx, ky - hk, omega);
        const auto fwp = val(kx, ky, omega + hw), fwm = val(kx, ky, omega - hw);
        if (!fxp || !fxm || !fyp || !fym || !fwp || !fwm) return std::nullopt;
        return Eigen::Vector3d((*fxp - *fxm) / (2 * hk), (*fyp - *fym) / (2 * hk), (*fwp - *fwm) / (2 * hw));
    };
    EfcSample out;
    out.theta = theta;
    out.k = q;
    const auto g1 = grad(rel_step);
    const auto g2 = grad(2.0 * rel_step);
    if (!g1 || (*g1)(2) == 0.0) {
        out.vg_checked = false;
        out.vg_dir = Eigen::Vector2d(std::cos(theta), std::sin(theta));
        return out;
    }
    const Eigen::Vector2d vg = -g1->head<2>() / (*g1)(2);
    out.vg_norm = vg.norm();
    out.vg_dir = out.vg_norm > 0.0 ? Eigen::Vector2d(vg / out.vg_norm) : Eigen::Vector2d(std::cos(theta), std::sin(theta));
    if (g2 && (*g2)(2) != 0.0) {
        const Eigen::Vector2d vg2 = -g2->head<2>() / (*g2)(2);
        out.vg_checked = (vg2 - vg).norm() <= 1e-3 * std::max(vg.norm(), 1e-300);
    } else {
        out.vg_checked = false;
    }
    return out;
}

inline std::vector<double> uniform_theta_grid(int n = 721) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = -pi + 2.0 * pi * i / (n - 1);
    return g;
}

/// Contour at frequency omega over the given directions.  Samples keep the smallest root;
/// additional roots go to `branches` and set `multi_root`.
inline EfcContour trace_efc(double omega, const PlasmaParams& params, const std::vector<double>& theta_grid,
                            const WavenumberRange& range = {}) {
    if (theta_grid.empty()) throw domain_error("trace_efc: empty theta grid");
    EfcContour c;
    c.omega = omega;
    std::size_t with_root = 0;
    for (std::size_t gi = 0; gi < theta_grid.size(); ++gi) {
        const double th = theta_grid[gi];
        const auto roots = spp_wavenumbers_exact(th, omega, params, range);
        if (roots.empty()) continue;
        ++with_root;
        if (roots.size() > 1) c.multi_root = true;
        for (std::size_t b = 0; b < roots.size(); ++b) {
            EfcSample s = group_velocity(th, roots[b], omega, params);
            s.branch = static_cast<int>(b);
            s.grid_index = static_cast<int>(gi);
            c.branches.push_back(s);
            if (b == 0) c.samples.push_back(s);
        }
    }
    if (with_root == 0) {
        c.topology = EfcTopology::empty;
    } else if (with_root == theta_grid.size()) {
        c.topology = EfcTopology::closed;
    } else {
        c.topology = EfcTopology::open_hyperbolic;
    }
    return c;
}

inline EfcContour trace_efc(double omega, const PlasmaParams& params) {
    return trace_efc(omega, params, uniform_theta_grid());
}

// ---------------------------------------------------------------------------------------
// Far field

struct FarFieldPattern {
    std::vector<double> azimuth;    ///< bin centres, radians in [-pi, pi)
    std::vector<double> intensity;  ///< normalized to a peak of 1 (all zero when no SPP exists)
    EfcTopology topology = EfcTopology::empty;
};

struct FarFieldOptions {
    double height = 0.01;          ///< dipole height in c / omega_p
    double bin_width_deg = 1.0;
    int smoothing_half_width = 3;  ///< raised-cosine kernel half-width in bins
};

namespace detail {

/// Pole strength of the dipole-projected reflection, Res_q [g^H (sum R e(+) e(-)^T) g], lossless.
inline cplx projected_residue(double theta, double q, double omega, const Eigen::Vector3cd& g,
                              const PlasmaParams& params) {
    const auto eps = permittivity(omega, params.lossless());
    auto projected = [&](double qq) {
        const double kx = qq * std::cos(theta);
        const double ky = qq * std::sin(theta);
        const SpectralPoint sp = medium_modes(kx, ky, eps);
        const Eigen::Matrix2cd r = reflection_matrix(sp);
        const VacuumBasis b = vacuum_basis(kx, ky, sp.kz_vacuum);
        Eigen::Matrix<cplx, 3, 2> up;
        up << b.s, b.p_up;
        Eigen::Matrix<cplx, 3, 2> down;
        down << b.s, b.p_down;
        return g.dot(up * r * down.transpose() * g);
    };
    const double h = 1e-5 * q;
    return 0.5 * h * (projected(q + h) - projected(q - h));
}

}  // namespace detail

/// Far-field SPP beam pattern of a dipole at the contour frequency.
///
/// Each contour segment between neighbouring directions (all branches, linked by nearest
/// k) radiates along its group velocity with power |a|^2 ds / |v_g|, spread uniformly over
/// the azimuth range its group velocity sweeps.  |a|^2 = |Res| exp(-2 sqrt(q^2 - 1) k0 d)
/// is the dipole-projected pole strength times the evanescent attenuation over the height.
inline FarFieldPattern farfield_pattern(const EfcContour& contour, const Eigen::Vector3cd& dipole,
                                        const PlasmaParams& params, const FarFieldOptions& opt = {}) {
    if (!(dipole.norm() > 0.0)) throw domain_error("farfield_pattern: dipole must be non-zero");
    const Eigen::Vector3cd g = dipole / dipole.norm();
    const int nbins = static_cast<int>(std::lround(360.0 / opt.bin_width_deg));
    FarFieldPattern out;
    out.topology = contour.topology;
    out.azimuth.resize(nbins);
    out.intensity.assign(nbins, 0.0);
    const double width = 2.0 * pi / nbins;
    for (int i = 0; i < nbins; ++i) out.azimuth[i] = -pi + (i + 0.5) * width;
    if (contour.branches.empty()) return out;

    const double omega = contour.omega;
    const auto& pts = contour.branches;
    std::vector<double> density(pts.size(), 0.0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const EfcSample& s = pts[i];
        if (!(s.vg_norm > 0.0)) continue;
        const double res = std::abs(detail::projected_residue(s.theta, s.k, omega, g, params));
        const double atten = std::exp(-2.0 * std::sqrt(s.k * s.k - 1.0) * omega * opt.height);
        density[i] = res * atten / s.vg_norm;
    }
    auto kvec = [&](const EfcSample& e) {
        return Eigen::Vector2d(e.k * omega * std::cos(e.theta), e.k * omega * std::sin(e.theta));
    };
    auto azimuth = [](const EfcSample& e) { return std::atan2(e.vg_dir.y(), e.vg_dir.x()); };

    std::vector<double> raw(nbins, 0.0);
    // Spread `w` uniformly over the arc [a, a + span] (span may be negative).
    auto deposit = [&](double a, double span, double w) {
        if (span < 0.0) {
            a += span;
            span = -span;
        }
        const double x0 = (a + pi) / width;
        if (span < 1e-12) {
            int bin = static_cast<int>(std::floor(x0));
            raw[((bin % nbins) + nbins) % nbins] += w;
            return;
        }
        const double x1 = x0 + span / width;
        for (int b = static_cast<int>(std::floor(x0)); b < x1; ++b) {
            const double overlap = std::min<double>(b + 1, x1) - std::max<double>(b, x0);
            if (overlap > 0.0) raw[((b % nbins) + nbins) % nbins] += w * overlap / (x1 - x0);
        }
    };

    for (std::size_t i = 0; i < pts.size(); ++i) {
        // Partner on the next grid direction: the only root there when both directions carry
        // a single root, otherwise the nearest k.
        const EfcSample& a = pts[i];
        std::vector<std::size_t> here;
        std::vector<std::size_t> next;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (pts[j].grid_index == a.grid_index) here.push_back(j);
            if (pts[j].grid_index == a.grid_index + 1) next.push_back(j);
        }
        const EfcSample* best = nullptr;
        std::size_t best_j = 0;
        if (here.size() == 1 && next.size() == 1) {
            best_j = next.front();
            best = &pts[best_j];
        } else {
            double best_rel = 0.5;
            for (std::size_t j : next) {
                const double rel = std::abs(pts[j].k - a.k) / std::max(pts[j].k, a.k);
                if (rel < best_rel) {
                    best_rel = rel;
                    best = &pts[j];
                    best_j = j;
                }
            }
        }
        if (!best || density[i] == 0.0 || density[best_j] == 0.0) continue;
        const double ds = (kvec(*best) - kvec(a)).norm();
        const double w = 0.5 * (density[i] + density[best_j]) * ds;
        const double phi_a = azimuth(a);
        const double span = std::remainder(azimuth(*best) - phi_a, 2.0 * pi);
        deposit(phi_a, span, w);
    }

    const int hw = opt.smoothing_half_width;
    std::vector<double> kernel(2 * hw + 1);
    double ksum = 0.0;
    for (int j = -hw; j <= hw; ++j) {
        kernel[j + hw] = 0.5 * (1.0 + std::cos(pi * j / (hw + 1)));
        ksum += kernel[j + hw];
    }
    for (int i = 0; i < nbins; ++i) {
        double acc = 0.0;
        for (int j = -hw; j <= hw; ++j) acc += kernel[j + hw] * raw[((i + j) % nbins + nbins) % nbins];
        out.intensity[i] = acc / ksum;
    }
    const double peak = *std::max_element(out.intensity.begin(), out.intensity.end());
    if (peak > 0.0) {
        for (double& v : out.intensity) v /= peak;
    }
    return out;
}

inline FarFieldPattern farfield_pattern(double omega, const Eigen::Vector3cd& dipole, const PlasmaParams& params,
                                        const std::vector<double>& theta_grid, const FarFieldOptions& opt = {}) {
    return farfield_pattern(trace_efc(omega, params, theta_grid), dipole, params, opt);
}

/// Number of circular runs of bins at or above `fraction` of the peak.
inline int count_lobes(const FarFieldPattern& p, double fraction = 0.5) {
    const std::size_t n = p.intensity.size();
    if (n == 0) return 0;
    std::vector<bool> on(n);
    for (std::size_t i = 0; i < n; ++i) on[i] = p.intensity[i] >= fraction && p.intensity[i] > 0.0;
    if (std::all_of(on.begin(), on.end(), [](bool b) { return b; })) return 1;
    int lobes = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (on[i] && !on[(i + n - 1) % n]) ++lobes;
    }
    return lobes;
}

}  // namespace recoil
