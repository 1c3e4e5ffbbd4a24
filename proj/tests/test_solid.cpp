#include <gtest/gtest.h>

#include <random>

#include "perifsi/errors.hpp"
#include "perifsi/solid.hpp"

using namespace perifsi;

namespace {

struct SolidFixture : ::testing::Test {
    CylinderConfig cyl;
    SolidParams params{1.3, 0.7, 0.4, 1.1};
    std::shared_ptr<const ShellBasis> shell = std::make_shared<ShellBasis>(BoundaryMode::PeriodicTheta, 3, 4, 4.0);
    std::shared_ptr<const SolidBasis> basis = std::make_shared<SolidBasis>(cyl, params, shell, 3, 10);

    SolidField random_field(std::mt19937_64& rng) const {
        std::normal_distribution<double> n01;
        Eigen::VectorXd c(basis->size());
        for (auto& v : c) v = n01(rng);
        return SolidField(basis, c);
    }
};

}  // namespace

TEST(SolidCutoff, HermiteProfile) {
    EXPECT_EQ(solid_cutoff(0.0)[0], 1.0);
    EXPECT_EQ(solid_cutoff(1.0)[0], 0.0);
    EXPECT_EQ(solid_cutoff(0.5)[0], 0.5);
    EXPECT_EQ(solid_cutoff(0.0)[1], 0.0);
    EXPECT_EQ(solid_cutoff(1.0)[1], 0.0);
}

TEST_F(SolidFixture, LiftTraceAndOuterBoundary) {
    Eigen::VectorXd c = Eigen::VectorXd::LinSpaced(shell->size(), 0.3, -0.8);
    const ShellField xi(shell, c);
    const SolidField d = solid_lift(basis, xi);
    for (double t : {0.0, 1.3, 4.4})
        for (double z : {0.5, 2.1, 3.7}) {
            const CylJet at_r = d(cyl.R, t, z);
            const double x = xi(t, z).value;
            EXPECT_EQ(at_r.value[0], x);
            EXPECT_EQ(at_r.value[1], 0.0);
            EXPECT_EQ(at_r.value[2], 0.0);
            EXPECT_EQ(d(cyl.R + cyl.H, t, z).value.norm(), 0.0);
            EXPECT_NEAR(d(cyl.R + 0.5 * cyl.H, t, z).value[0], 0.5 * x, 1e-15);
        }
}

TEST_F(SolidFixture, TraceCompatibilityAtSurfaceNodes) {
    const auto grid = SurfaceGrid::standard(shell);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n01;
    Eigen::VectorXd c(shell->size());
    for (auto& v : c) v = n01(rng);
    const SolidField d = solid_lift(basis, ShellField(shell, c));
    const auto eta = grid.evaluate(c);
    for (int node = 0; node < grid.size(); ++node) {
        const double t = grid.theta().nodes[node / grid.n_z()], z = grid.z().nodes[node % grid.n_z()];
        const CylJet v = d(cyl.R, t, z);
        EXPECT_NEAR(v.value[0], eta[node].value, 1e-14);
        EXPECT_EQ(v.value[1], 0.0);
    }
}

TEST_F(SolidFixture, InteriorModesVanishOnClampedBoundary) {
    for (int j = 0; j < basis->n_interior(); ++j) {
        for (double t : {0.2, 3.0})
            for (double z : {0.4, 2.5}) EXPECT_LE(basis->interior(j, cyl.R, t, z).value.norm(), 1e-14);
        for (double r : {1.1, 1.4})
            for (double z : {0.0, 4.0}) EXPECT_LE(basis->interior(j, r, 1.0, z).value.norm(), 1e-12);
    }
}

TEST_F(SolidFixture, InteriorModesMassOrthonormalAndAscending) {
    const auto& m = basis->mass_matrix();
    const int nl = basis->n_lifted(), ni = basis->n_interior();
    const Eigen::MatrixXd g = m.bottomRightCorner(ni, ni);
    EXPECT_LE((g - Eigen::MatrixXd::Identity(ni, ni)).cwiseAbs().maxCoeff(), 1e-10);
    const auto& ev = basis->interior_eigenvalues();
    for (int j = 0; j + 1 < ni; ++j) EXPECT_LE(ev[j], ev[j + 1]);
    EXPECT_GT(ev[0], 0.0);
    EXPECT_EQ(nl, shell->size());
}

TEST_F(SolidFixture, LameFormProperties) {
    std::mt19937_64 rng(9);
    const SolidField zero = SolidField::zero(basis);
    for (int trial = 0; trial < 4; ++trial) {
        const SolidField d = random_field(rng), z = random_field(rng), v = random_field(rng);
        EXPECT_EQ(lame_form(zero, zero, z), 0.0);
        const double a = lame_form(d, zero, z), b = lame_form(z, zero, d);
        EXPECT_NEAR(a, b, 1e-11 * (1 + std::abs(a)));
        EXPECT_GE(lame_form(d, zero, d), 0.0);
        // Matrix path agrees with the pointwise path.
        const double mat = z.coefficients().dot(basis->elastic_matrix() * d.coefficients() +
                                                basis->viscous_matrix() * v.coefficients());
        EXPECT_NEAR(lame_form(d, v, z), mat, 1e-10 * (1 + std::abs(mat)));
    }
}

TEST_F(SolidFixture, LiftedPairMatchesDenseQuadrature) {
    const SolidField y0 = solid_lift(basis, ShellField::unit(shell, 0));
    const SolidField y1 = solid_lift(basis, ShellField::unit(shell, 2));
    const SolidField zero = SolidField::zero(basis);
    std::vector<double> rb, zb;
    for (int i = 0; i <= 4; ++i) rb.push_back(cyl.R + cyl.H * i / 4);
    for (int i = 0; i <= 16; ++i) zb.push_back(cyl.L * i / 16);
    const auto rr = composite_gauss(8, rb), zr = composite_gauss(12, zb);
    const auto tr = periodic_trapezoid(64, 2 * M_PI);
    double ref = 0.0;
    for (std::size_t i = 0; i < rr.size(); ++i)
        for (std::size_t j = 0; j < tr.size(); ++j)
            for (std::size_t k = 0; k < zr.size(); ++k) {
                const double r = rr.nodes[i];
                const Eigen::Matrix3d a = local_gradient(y0(r, tr.nodes[j], zr.nodes[k]), r);
                const Eigen::Matrix3d b = local_gradient(y1(r, tr.nodes[j], zr.nodes[k]), r);
                ref += rr.weights[i] * tr.weights[j] * zr.weights[k] * r *
                       (params.lambda1 * a.cwiseProduct(b).sum() + params.lambda2 * a.trace() * b.trace());
            }
    const double v = lame_form(y0, zero, y1);
    EXPECT_NEAR(v, ref, 1e-8 * std::abs(ref));
}

TEST_F(SolidFixture, BasisMismatch) {
    auto other = std::make_shared<SolidBasis>(cyl, params, shell, 2, 4);
    EXPECT_THROW(lame_form(SolidField::zero(basis), SolidField::zero(basis), SolidField::zero(other)), BasisMismatch);
}
