#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "recoil/material.hpp"

using namespace recoil;

namespace {

// Drude oracle from the electron equation of motion in normalized units:
// (Gamma - i w) v + v x (w_c y) = -E,  P = v / (i w)  =>  eps = I + (i / w) M^-1 with M v = -(...).
Eigen::Matrix3cd drude_oracle(double w, double wc, double gamma) {
    Eigen::Matrix3cd m = (gamma - I * w) * Eigen::Matrix3cd::Identity();
    // v x (wc y) = wc (-v_z, 0, v_x)
    m(0, 2) += -wc;
    m(2, 0) += wc;
    return Eigen::Matrix3cd::Identity() + (I / w) * m.inverse();
}

}  // namespace

TEST(Permittivity, ReferenceValuesLossless) {
    const auto v = permittivity(0.7, PlasmaParams{0.4, 0.0});
    EXPECT_NEAR(v.eps_t.real(), -2.0303, 1e-4);
    EXPECT_NEAR(v.eps_a.real(), -1.0408, 1e-4);
    EXPECT_NEAR(v.eps_g.real(), -1.7316, 1e-4);
    EXPECT_EQ(v.eps_t.imag(), 0.0);
}

TEST(Permittivity, MatchesEquationOfMotionOracle) {
    for (double wc : {-0.8, -0.1, 0.0, 0.4, 1.3}) {
        for (double w : {0.3, 0.7, 1.1, 2.5}) {
            const PlasmaParams p{wc, 0.015};
            const Eigen::Matrix3cd eps = permittivity_tensor(w, p);
            const Eigen::Matrix3cd ref = drude_oracle(w, wc, 0.015);
            EXPECT_LT((eps - ref).cwiseAbs().maxCoeff(), 1e-12 * ref.cwiseAbs().maxCoeff()) << "wc=" << wc << " w=" << w;
        }
    }
}

TEST(Permittivity, AnisotropyWithoutCancellation) {
    const PlasmaParams p{1e-6, 0.015};
    const auto v = permittivity(0.7, p);
    const cplx u = cplx{0.7, 0.015};
    const cplx expected = 1e-12 / (0.7 * u * (u * u - 1e-12));
    EXPECT_NEAR(std::abs(v.anisotropy - expected) / std::abs(expected), 0.0, 1e-12);
}

TEST(Permittivity, LossIsPassive) {
    for (double w : {0.2, 0.5, 0.9, 1.4}) {
        const Eigen::Matrix3cd eps = permittivity_tensor(w, PlasmaParams{0.4, 0.02});
        const Eigen::Matrix3cd anti_hermitian = (eps - eps.adjoint()) / (2.0 * I);
        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(anti_hermitian);
        EXPECT_GT(es.eigenvalues().minCoeff(), 0.0) << "w=" << w;
    }
}

TEST(Permittivity, LosslessTensorIsHermitian) {
    const Eigen::Matrix3cd eps = permittivity_tensor(0.65, PlasmaParams{0.4, 0.0});
    EXPECT_LT((eps - eps.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Permittivity, BiasFlipTransposesTensor) {
    const PlasmaParams p{0.4, 0.015};
    const Eigen::Matrix3cd a = permittivity_tensor(0.8, p);
    const Eigen::Matrix3cd b = permittivity_tensor(0.8, p.flipped_bias());
    EXPECT_LT((a.transpose() - b).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Permittivity, RejectsSingularPoints) {
    EXPECT_THROW(permittivity(0.0, PlasmaParams{0.4, 0.0}), domain_error);
    EXPECT_THROW(permittivity(0.4, PlasmaParams{0.4, 0.0}), domain_error);
    EXPECT_NO_THROW(permittivity(0.4, PlasmaParams{0.4, 0.015}));
}

TEST(PlasmaParams, Validation) {
    EXPECT_THROW(validate(PlasmaParams{0.4, -0.1}), domain_error);
    EXPECT_THROW(validate(PlasmaParams{std::nan(""), 0.0}), domain_error);
    EXPECT_THROW(validate(PlasmaParams{0.4, 0.0, -1.0}), domain_error);
    EXPECT_NO_THROW(validate(PlasmaParams{-0.4, 0.0, 31e12}));
}

TEST(PlasmaParams, LengthUnit) {
    EXPECT_FALSE(PlasmaParams{}.length_unit_m());
    const PlasmaParams p{0.0, 0.0, InSb::omega_p_rad_s()};
    EXPECT_NEAR(*p.length_unit_m(), 2.99792458e8 / 31e12, 1e-18);
}

TEST(BandEdges, ReferenceBias) {
    const auto b = characteristic_frequencies(PlasmaParams{0.4, 0.015});
    EXPECT_DOUBLE_EQ(b.omega_spp, 1.0 / std::sqrt(2.0));
    EXPECT_NEAR(b.omega_plus, 0.93485, 1e-5);
    EXPECT_NEAR(b.omega_minus, 0.53485, 1e-5);
}

TEST(BandEdges, MatchSurfaceResonanceOfTensor) {
    // Along +-x the quasi-static surface condition is eps_t +- eps_g = -1; bisect it directly.
    const double wc = 0.4;
    auto f = [&](double w, double sign) {
        const auto v = permittivity(w, PlasmaParams{wc, 0.0});
        return (v.eps_t + sign * v.eps_g).real() + 1.0;
    };
    auto bisect = [&](double lo, double hi, double sign) {
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (f(lo, sign) * f(mid, sign) <= 0.0 ? hi : lo) = mid;
        }
        return 0.5 * (lo + hi);
    };
    const auto b = characteristic_frequencies(PlasmaParams{wc, 0.0});
    EXPECT_NEAR(bisect(0.8, 1.0, +1.0), b.omega_plus, 1e-12);
    EXPECT_NEAR(bisect(0.45, 0.6, -1.0), b.omega_minus, 1e-12);
}

TEST(BandEdges, SymmetricInBias) {
    const auto a = characteristic_frequencies(PlasmaParams{0.3, 0.0});
    const auto b = characteristic_frequencies(PlasmaParams{-0.3, 0.0});
    EXPECT_DOUBLE_EQ(a.omega_plus, b.omega_plus);
    EXPECT_DOUBLE_EQ(a.omega_minus, b.omega_minus);
    EXPECT_NEAR(a.omega_plus - a.omega_minus, 0.3, 1e-15);
}

TEST(InSbScale, CyclotronPerTesla) {
    EXPECT_NEAR(InSb::normalized_cyclotron(1.0), 8.0 / 31.0, 1e-15);
    EXPECT_NEAR(InSb::normalized_cyclotron(5.0), 40.0 / 31.0, 1e-15);
}
