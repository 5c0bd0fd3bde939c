#include <gtest/gtest.h>

#include "recoil/modes.hpp"

using namespace recoil;

namespace {

struct Fresnel {
    cplx rs;
    cplx rp;
};

Fresnel fresnel(double q, cplx eps) {
    const cplx kz = vacuum_kz(q);
    cplx k1 = std::sqrt(eps - q * q);
    if (k1.imag() < 0.0) k1 = -k1;
    return {(kz - k1) / (kz + k1), (eps * kz - k1) / (eps * kz + k1)};
}

Eigen::Vector3cd cross(const Eigen::Vector3cd& a, const Eigen::Vector3cd& b) {
    return {a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0)};
}

}  // namespace

TEST(ReflectionMatrix, FresnelReductionWithoutBias) {
    const PlasmaParams p{0.0, 0.015};
    for (double w : {0.5, 0.9, 1.5}) {
        const cplx eps = permittivity(w, p).eps_t;
        for (double q : {0.0, 0.3, 0.9, 1.2, 3.0, 30.0}) {
            for (double th : {0.0, 0.4, 2.0}) {
                const Eigen::Matrix2cd r = reflection_matrix(q * std::cos(th), q * std::sin(th), w, p);
                const Fresnel f = fresnel(q, eps);
                EXPECT_LT(std::abs(r(0, 0) - f.rs), 1e-9) << "w=" << w << " q=" << q;
                EXPECT_LT(std::abs(r(1, 1) - f.rp), 1e-9) << "w=" << w << " q=" << q;
                EXPECT_LT(std::abs(r(0, 1)) + std::abs(r(1, 0)), 1e-9);
            }
        }
    }
}

TEST(ReflectionMatrix, ElectrostaticLimit) {
    const PlasmaParams p{0.0, 0.015};
    const double w = 1.5;
    const cplx eps = permittivity(w, p).eps_t;
    const Eigen::Matrix2cd r = reflection_matrix(100.0 * std::cos(0.7), 100.0 * std::sin(0.7), w, p);
    EXPECT_LT(std::abs(r(1, 1) - (eps - 1.0) / (eps + 1.0)), 1e-4);
}

TEST(ReflectionMatrix, NonreciprocalUnderBias) {
    const PlasmaParams p{0.4, 0.015};
    double biased = 0.0;
    double unbiased = 0.0;
    for (double q : {0.5, 1.5, 4.0}) {
        const Eigen::Matrix2cd a = reflection_matrix(q, 0.2, 0.7, p);
        const Eigen::Matrix2cd b = reflection_matrix(-q, 0.2, 0.7, p);
        biased = std::max(biased, (a - b).cwiseAbs().maxCoeff());
        const Eigen::Matrix2cd c = reflection_matrix(q, 0.2, 0.7, PlasmaParams{0.0, 0.015});
        const Eigen::Matrix2cd d = reflection_matrix(-q, 0.2, 0.7, PlasmaParams{0.0, 0.015});
        unbiased = std::max(unbiased, (c - d).cwiseAbs().maxCoeff());
    }
    EXPECT_GT(biased, 1e-3);
    EXPECT_LT(unbiased, 1e-12);
}

TEST(ReflectionMatrix, BiasFlipMirrorsKx) {
    // mirror x -> -x maps the bias-along-y tensor to its transpose
    const PlasmaParams p{0.4, 0.015};
    for (double q : {0.6, 2.0, 10.0}) {
        const Eigen::Matrix2cd a = reflection_matrix(q * 0.8, q * 0.6, 0.75, p);
        const Eigen::Matrix2cd b = reflection_matrix(-q * 0.8, q * 0.6, 0.75, p.flipped_bias());
        // s flips sign under the mirror while p does not
        Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
        m(0, 0) = -1.0;
        EXPECT_LT((a - m * b * m).cwiseAbs().maxCoeff(), 1e-10) << "q=" << q;
    }
}

TEST(ReflectionMatrix, PassiveForPropagatingWaves) {
    const PlasmaParams p{0.4, 0.015};
    for (double w : {0.3, 0.7, 1.2, 2.0}) {
        for (double q : {0.0, 0.2, 0.6, 0.95}) {
            for (double th : {0.0, 1.0, 2.5, -1.2}) {
                const Eigen::Matrix2cd r = reflection_matrix(q * std::cos(th), q * std::sin(th), w, p);
                // s and p are unit vectors for q < 1, so the power reflectance is |R|^2
                const Eigen::JacobiSVD<Eigen::Matrix2cd> svd(r);
                EXPECT_LE(svd.singularValues()(0), 1.0 + 1e-12) << "w=" << w << " q=" << q;
            }
        }
    }
}

TEST(MediumModes, SatisfyWaveEquationAndDecayDownward) {
    const PlasmaParams p{0.4, 0.015};
    for (double w : {0.6, 0.8, 1.3}) {
        const Eigen::Matrix3cd eps = permittivity_tensor(w, p);
        for (double q : {0.3, 1.4, 8.0, 200.0}) {
            for (double th : {0.2, 1.9, -2.7}) {
                const SpectralPoint sp = gyrotropic_kz_modes(q * std::cos(th), q * std::sin(th), w, p);
                for (const auto& m : sp.medium) {
                    const Eigen::Vector3cd k(sp.kx, sp.ky, m.kz);
                    const Eigen::Vector3cd residual = cross(k, cross(k, m.e)) + eps * m.e;
                    EXPECT_LT(residual.norm(), 1e-9 * (1.0 + q * q)) << "w=" << w << " q=" << q;
                    EXPECT_NEAR(m.e.norm(), 1.0, 1e-12);
                    EXPECT_LT((m.h - cross(k, m.e)).norm(), 1e-12 * (1.0 + q));
                    EXPECT_LE(m.kz.imag(), 1e-14);  // fields decay (or radiate) into z < 0
                }
            }
        }
    }
}

TEST(MediumModes, QuarticRootsAreEvenInKx) {
    // the dispersion quartic depends on kx only through kx^2; asymmetry lives in polarizations
    const PlasmaParams p{0.4, 0.015};
    const SpectralPoint a = gyrotropic_kz_modes(1.3, 0.4, 0.7, p);
    const SpectralPoint b = gyrotropic_kz_modes(-1.3, 0.4, 0.7, p);
    for (const auto& ra : a.kz_roots) {
        double best = 1e300;
        for (const auto& rb : b.kz_roots) best = std::min(best, std::abs(ra - rb));
        EXPECT_LT(best, 1e-12);
    }
    EXPECT_GT((a.medium[0].e.cwiseAbs() - b.medium[0].e.cwiseAbs()).norm() +
                  (a.medium[1].e.cwiseAbs() - b.medium[1].e.cwiseAbs()).norm(),
              1e-3);
}

TEST(MediumModes, IsotropicBranch) {
    const SpectralPoint sp = gyrotropic_kz_modes(0.5, 0.5, 0.9, PlasmaParams{0.0, 0.01});
    EXPECT_TRUE(sp.isotropic);
    EXPECT_LT(std::abs(sp.medium[0].kz - sp.medium[1].kz), 1e-14);
    EXPECT_LT(std::abs(sp.medium[0].e.dot(sp.medium[1].e)), 1e-12);
}

TEST(MediumModes, NoSpuriousDegeneracyAtLargeWavenumber) {
    EXPECT_NO_THROW(gyrotropic_kz_modes(-1663.0, 0.236, 0.6, PlasmaParams{0.4, 0.015}));
}

TEST(PoleFunction, ChangesSignAtIsotropicSurfacePlasmon) {
    const double w = 0.7;
    const auto eps = permittivity(w, PlasmaParams{0.0, 0.0});
    const double q_spp = std::sqrt((eps.eps_t / (eps.eps_t + 1.0)).real());
    const PoleSample below = pole_function(q_spp * 0.99, 0.0, eps);
    const PoleSample above = pole_function(q_spp * 1.01, 0.0, eps);
    ASSERT_TRUE(below.valid && above.valid);
    EXPECT_LT(below.value * above.value, 0.0);
    EXPECT_FALSE(pole_function(0.5, 0.0, eps).valid);
}
