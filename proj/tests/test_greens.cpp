#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "recoil/greens.hpp"

using namespace recoil;

namespace {

double max_abs(const Eigen::Matrix3cd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(VacuumGreen, ImaginaryPartSeriesAtSmallSeparation) {
    // Im G0 = k/(4 pi) [(2/3 - 2x^2/15) I + (x^2/15) R R] + O(x^4), x = kR
    const double k = 0.8;
    const Eigen::Vector3d r1(0.1, -0.2, 0.3);
    const Eigen::Vector3d dir = Eigen::Vector3d(1.0, 2.0, -0.5).normalized();
    const double x = 1e-2;
    const Eigen::Vector3d r2 = r1 + dir * (x / k);
    const Eigen::Matrix3d im = vacuum_green(r1, r2, k).imag();
    const Eigen::Matrix3d oracle =
        k / (4.0 * pi) * ((2.0 / 3.0 - 2.0 * x * x / 15.0) * Eigen::Matrix3d::Identity() + (x * x / 15.0) * dir * dir.transpose());
    EXPECT_LT((im - oracle).cwiseAbs().maxCoeff(), 1e-7 * oracle.cwiseAbs().maxCoeff());
}

TEST(VacuumGreen, CoincidentLimit) {
    const Eigen::Vector3d r(0.0, 0.0, 1.0);
    const Eigen::Matrix3cd g = vacuum_green(r, r, 2.0);
    EXPECT_LT((g.imag() - 2.0 / (6.0 * pi) * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(VacuumGreen, FarFieldIsTransverse) {
    const double k = 1.0;
    const Eigen::Vector3d dir(0.0, 0.6, 0.8);
    const Eigen::Matrix3cd g = vacuum_green(Eigen::Vector3d::Zero(), 1e4 * dir, k);
    const Eigen::Vector3cd longitudinal = g * dir.cast<cplx>();
    EXPECT_LT(longitudinal.norm(), 1e-3 * max_abs(g));
}

TEST(ScatteredGreen, ImageDipoleLimitWithoutBias) {
    const PlasmaParams p{0.0, 0.015};
    const double w = 0.6;
    const double d = 0.01;
    const cplx eps = permittivity(w, p).eps_t;
    const cplx image = (eps - 1.0) / (eps + 1.0) / (16.0 * pi * w * w * d * d * d);
    const Eigen::Matrix3cd g = scattered_green({0, 0, d}, {0, 0, d}, w, p);
    EXPECT_LT(std::abs(g(2, 2) - image), 0.03 * std::abs(image));
    EXPECT_LT(std::abs(g(0, 0) - 0.5 * image), 0.03 * std::abs(image));
    EXPECT_LT(std::abs(g(0, 0) - g(1, 1)), 1e-6 * std::abs(image));
    EXPECT_LT(std::abs(g(0, 2)) + std::abs(g(2, 0)) + std::abs(g(0, 1)), 1e-6 * std::abs(image));
}

TEST(ScatteredGreen, MatchesQuasistaticTensorUnderBias) {
    const PlasmaParams p{0.4, 0.015};
    const double d = 0.01;
    for (double w : {0.6, 0.8}) {
        const Eigen::Matrix3cd g = scattered_green({0, 0, d}, {0, 0, d}, w, p);
        const Eigen::Matrix3cd qs = quasistatic_green(d, w, p);
        EXPECT_LT(max_abs(g - qs), 0.01 * max_abs(qs)) << "w=" << w;
    }
}

TEST(ScatteredGreen, PassiveDecay) {
    const PlasmaParams p{0.4, 0.015};
    const Eigen::Vector3d r(0, 0, 0.02);
    for (double w : {0.5, 0.7, 0.95}) {
        const Eigen::Matrix3cd g = scattered_green(r, r, w, p) + vacuum_green(r, r, w);
        // the anti-Hermitian part is the dissipated power form; it must be positive definite
        const Eigen::Matrix3cd ah = (g - g.adjoint()) / (2.0 * I);
        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(ah);
        EXPECT_GT(es.eigenvalues().minCoeff(), 0.0) << "w=" << w;
    }
}

TEST(ScatteredGreen, OnsagerReciprocity) {
    const PlasmaParams p{0.4, 0.015};
    const Eigen::Vector3d r1(0.0, 0.0, 0.01);
    const Eigen::Vector3d r2(0.015, -0.01, 0.02);
    const Eigen::Matrix3cd a = scattered_green(r1, r2, 0.7, p);
    const Eigen::Matrix3cd b = scattered_green(r2, r1, 0.7, p.flipped_bias());
    EXPECT_LT(max_abs(a - b.transpose()), 1e-5 * max_abs(a));
    // and the bias makes the exchange itself asymmetric
    const Eigen::Matrix3cd c = scattered_green(r2, r1, 0.7, p);
    EXPECT_GT(max_abs(a - c.transpose()), 1e-2 * max_abs(a));
}

TEST(ScatteredGreen, LateralDerivativeMatchesFiniteDifference) {
    const PlasmaParams p{0.4, 0.015};
    const double d = 0.01;
    const Eigen::Vector3d r(0, 0, d);
    const GreenBundle b = scattered_green_bundle(r, r, 0.7, p);
    const double h = 1e-3 * d;
    for (int alpha = 0; alpha < 2; ++alpha) {
        Eigen::Vector3d step = Eigen::Vector3d::Zero();
        step(alpha) = h;
        const Eigen::Matrix3cd fd =
            (scattered_green(r + step, r, 0.7, p) - scattered_green(r - step, r, 0.7, p)) / (2.0 * h);
        const Eigen::Matrix3cd& an = alpha == 0 ? b.dgx : b.dgy;
        EXPECT_LT(max_abs(an - fd), 1e-3 * max_abs(b.dgx)) << "alpha=" << alpha;
        EXPECT_LT(max_abs(lateral_green_derivative(r, alpha, 0.7, p) - an), 1e-12 * max_abs(b.dgx));
    }
}

TEST(ScatteredGreen, CutoffConvergence) {
    const PlasmaParams p{0.4, 0.015};
    const Eigen::Vector3d r(0, 0, 0.01);
    QuadratureSpec q30;
    QuadratureSpec q60;
    q60.cutoff = 60.0;
    const Eigen::Matrix3cd a = scattered_green(r, r, 0.7, p, q30);
    const Eigen::Matrix3cd b = scattered_green(r, r, 0.7, p, q60);
    EXPECT_LT(max_abs(a - b), q30.rel_tol * max_abs(a));
}

TEST(ScatteredGreen, ToleranceIsHonoured) {
    const PlasmaParams p{0.4, 0.015};
    const Eigen::Vector3d r(0, 0, 0.01);
    QuadratureSpec loose;
    loose.rel_tol = 1e-4;
    QuadratureSpec tight;
    tight.rel_tol = 1e-8;
    tight.max_panels = 4000;
    tight.max_inner_panels = 2000;
    const GreenBundle a = scattered_green_bundle(r, r, 0.8, p, loose);
    const GreenBundle b = scattered_green_bundle(r, r, 0.8, p, tight);
    EXPECT_TRUE(a.converged && b.converged);
    EXPECT_LT(max_abs(a.g - b.g), 1e-4 * max_abs(b.g));
    EXPECT_LT(max_abs(a.dgx - b.dgx), 1e-4 * max_abs(b.dgx));
}

TEST(QuadratureSpec, Validation) {
    QuadratureSpec q;
    q.cutoff = 8.0;
    EXPECT_THROW(validate(q), domain_error);
    q.cutoff = 30.0;
    q.rel_tol = 0.1;
    EXPECT_THROW(validate(q), domain_error);
    q.rel_tol = 0.0;
    EXPECT_THROW(validate(q), domain_error);
}

TEST(ScatteredGreen, RejectsPointsBelowSurface) {
    EXPECT_THROW(scattered_green({0, 0, -0.01}, {0, 0, 0.01}, 0.7, PlasmaParams{0.4, 0.015}), domain_error);
}
