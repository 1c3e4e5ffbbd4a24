#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "perifsi/beam.hpp"
#include "perifsi/errors.hpp"
#include "perifsi/shell.hpp"

using namespace perifsi;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Textbook form, kept separate from the library's stable evaluation.
double naive_beam(double beta, double length, double x) {
    const double bl = beta * length;
    const double s = (std::cosh(bl) - std::cos(bl)) / (std::sinh(bl) - std::sin(bl));
    return std::cosh(beta * x) - std::cos(beta * x) - s * (std::sinh(beta * x) - std::sin(beta * x));
}

double dense(const std::function<double(double)>& f, double a, double b) {
    std::vector<double> breaks;
    for (int i = 0; i <= 40; ++i) breaks.push_back(a + (b - a) * i / 40);
    return composite_gauss(20, breaks).integrate(f);
}

}  // namespace

TEST(BeamModes, RootsMatchTabulatedValues) {
    EXPECT_NEAR(clamped_beam_root(0), 4.730040744862704, 1e-13);
    EXPECT_NEAR(clamped_beam_root(1), 7.853204624095838, 1e-13);
    EXPECT_NEAR(clamped_beam_root(2), 10.995607838001671, 1e-13);
    for (int k = 0; k < 20; ++k) {
        const double x = clamped_beam_root(k);
        EXPECT_NEAR(std::cos(x) * std::cosh(x), 1.0, 1e-12 * std::cosh(x));
    }
}

TEST(BeamModes, ClampedAtBothEnds) {
    const auto f = ModeFamily1D::clamped_beam(4.0, 16);
    for (int k = 0; k < f.size(); ++k)
        for (double x : {0.0, 4.0}) {
            const Jet1D j = f.eval(k, x);
            EXPECT_LE(std::abs(j[0]), 1e-12) << k;
            EXPECT_LE(std::abs(j[1]), 1e-12) << k;
        }
}

TEST(BeamModes, OrthonormalAgainstDenseQuadrature) {
    const auto f = ModeFamily1D::clamped_beam(4.0, 12);
    for (int j = 0; j < f.size(); ++j)
        for (int k = 0; k < f.size(); ++k) {
            const double v = dense([&](double x) { return f.value(j, x) * f.value(k, x); }, 0.0, 4.0);
            EXPECT_NEAR(v, j == k ? 1.0 : 0.0, 1e-10) << j << "," << k;
        }
}

TEST(BeamModes, ProportionalToTextbookForm) {
    const auto f = ModeFamily1D::clamped_beam(2.0, 4);
    for (int k = 0; k < 4; ++k) {
        const double ratio = f.value(k, 0.37) / naive_beam(f.wavenumber(k), 2.0, 0.37);
        for (double x : {0.1, 0.8, 1.3, 1.9})
            EXPECT_NEAR(f.value(k, x), ratio * naive_beam(f.wavenumber(k), 2.0, x), 1e-10);
    }
}

TEST(BeamModes, DerivativesMatchFiniteDifferences) {
    for (auto f : {ModeFamily1D::clamped_beam(3.0, 8), ModeFamily1D::fourier(7)}) {
        const double h = 1e-5;
        for (int k = 0; k < f.size(); ++k)
            for (double x : {0.3, 1.1, 2.7}) {
                const Jet1D j = f.eval(k, x), jp = f.eval(k, x + h), jm = f.eval(k, x - h);
                for (int d = 0; d < 3; ++d) {
                    const double fd = (jp[d] - jm[d]) / (2 * h);
                    EXPECT_NEAR(j[d + 1], fd, 1e-6 * (1 + std::abs(j[d + 1]))) << k << " d" << d;
                }
            }
    }
}

TEST(BeamModes, ClosedFormIntegralsMatchQuadrature) {
    for (auto f : {ModeFamily1D::clamped_beam(4.0, 8), ModeFamily1D::fourier(9),
                   ModeFamily1D::clamped_beam(kTwoPi, 5)}) {
        for (double x : {0.0, 0.7, 2.2, 3.9}) {
            for (int j = 0; j < f.size(); ++j) {
                const double ref = dense([&](double s) { return f.value(j, s); }, 0.0, x);
                EXPECT_NEAR(f.integral(j, x), ref, 1e-11);
                for (int k = 0; k < f.size(); ++k) {
                    const double pref = dense([&](double s) { return f.value(j, s) * f.value(k, s); }, 0.0, x);
                    EXPECT_NEAR(f.product_integral(j, k, x), pref, 1e-10) << j << "," << k << " at " << x;
                }
            }
        }
    }
}

TEST(ShellBasisTest, ClampedAllVanishesOnBoundary) {
    ShellBasis basis(BoundaryMode::ClampedAll, 4, 6, 4.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ut(0.0, kTwoPi), uz(0.0, 4.0);
    for (int k = 0; k < basis.size(); ++k)
        for (int s = 0; s < 10; ++s) {
            for (auto [t, z] : {std::pair{0.0, uz(rng)}, {kTwoPi, uz(rng)}, {ut(rng), 0.0}, {ut(rng), 4.0}}) {
                const ShellJet j = basis.mode(k, t, z);
                EXPECT_LE(std::abs(j.value), 1e-12);
                EXPECT_LE(std::abs(j.d_theta), 1e-12);
                EXPECT_LE(std::abs(j.d_z), 1e-12);
            }
        }
}

TEST(ShellBasisTest, GramMatrixIsIdentity) {
    for (auto mode : {BoundaryMode::ClampedAll, BoundaryMode::PeriodicTheta}) {
        ShellBasis basis(mode, 5, 6, 4.0);
        const Eigen::MatrixXd g = shell_gram_matrix(basis);
        EXPECT_LE((g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff(), 1e-10);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
        EXPECT_GT(es.eigenvalues().minCoeff(), 0.5);
    }
}

TEST(ShellBasisTest, AzimuthalModeZeroIsThetaIndependent) {
    ShellBasis basis(BoundaryMode::PeriodicTheta, 3, 5, 4.0);
    for (int b = 0; b < basis.n_z(); ++b) {
        const double v0 = basis.mode(b, 0.0, 1.3).value;
        for (double t : {0.4, 1.7, 3.3, 5.9}) EXPECT_DOUBLE_EQ(basis.mode(b, t, 1.3).value, v0);
        EXPECT_EQ(basis.mode(b, 2.0, 1.3).d_theta, 0.0);
    }
}

TEST(ShellBasisTest, IndexOutOfRange) {
    ShellBasis basis(BoundaryMode::PeriodicTheta, 1, 4, 4.0);
    EXPECT_THROW(basis.mode(4, 0.0, 1.0), IndexOutOfRange);
    EXPECT_THROW(basis.mode(-1, 0.0, 1.0), IndexOutOfRange);
}

TEST(ShellBasisTest, GridEvaluationMatchesPointwise) {
    auto basis = std::make_shared<ShellBasis>(BoundaryMode::PeriodicTheta, 3, 4, 4.0);
    Eigen::VectorXd c = Eigen::VectorXd::LinSpaced(basis->size(), -1.0, 2.0);
    const auto grid = SurfaceGrid::standard(basis);
    const auto vals = grid.evaluate(c);
    for (int node = 0; node < grid.size(); node += 7) {
        const double t = grid.theta().nodes[node / grid.n_z()], z = grid.z().nodes[node % grid.n_z()];
        const ShellJet p = basis->evaluate(c, t, z);
        EXPECT_NEAR(vals[node].value, p.value, 1e-13);
        EXPECT_NEAR(vals[node].d_tz, p.d_tz, 1e-12);
    }
}

class BiharmonicTest : public ::testing::TestWithParam<BoundaryMode> {};

TEST_P(BiharmonicTest, SymmetricLinearCoercive) {
    auto basis = std::make_shared<ShellBasis>(GetParam(), 3, 5, 4.0);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n01;
    auto random_field = [&] {
        Eigen::VectorXd c(basis->size());
        for (auto& v : c) v = n01(rng);
        return ShellField(basis, c);
    };
    for (int trial = 0; trial < 5; ++trial) {
        const ShellField eta = random_field(), xi = random_field();
        const double k = biharmonic_form(eta, xi);
        EXPECT_LE(std::abs(k - biharmonic_form(xi, eta)), 1e-12 * (1 + std::abs(k)));
        EXPECT_NEAR(biharmonic_form(eta * 2.5, xi), 2.5 * k, 1e-11 * (1 + std::abs(k)));
        EXPECT_GT(biharmonic_form(eta, eta), 0.0);
    }
    EXPECT_EQ(biharmonic_form(ShellField::zero(basis), ShellField::zero(basis)), 0.0);
}

TEST_P(BiharmonicTest, MatrixMatchesForm) {
    auto basis = std::make_shared<ShellBasis>(GetParam(), 3, 4, 4.0);
    const Eigen::MatrixXd k = shell_stiffness_matrix(*basis);
    for (int i = 0; i < basis->size(); ++i)
        for (int j = 0; j < basis->size(); ++j) {
            const double v = biharmonic_form(ShellField::unit(basis, i), ShellField::unit(basis, j));
            EXPECT_NEAR(k(i, j), v, 1e-10 * (1 + std::abs(v)));
        }
}

TEST_P(BiharmonicTest, SingleModeMatchesDenseQuadrature) {
    auto basis = std::make_shared<ShellBasis>(GetParam(), 2, 3, 4.0);
    const ShellField y = ShellField::unit(basis, 0);
    double ref = 0.0;
    std::vector<double> tb, zb;
    for (int i = 0; i <= 16; ++i) tb.push_back(kTwoPi * i / 16), zb.push_back(4.0 * i / 16);
    const auto tr = composite_gauss(16, tb), zr = composite_gauss(16, zb);
    for (std::size_t i = 0; i < tr.size(); ++i)
        for (std::size_t j = 0; j < zr.size(); ++j) {
            const ShellJet h = y(tr.nodes[i], zr.nodes[j]);
            ref += tr.weights[i] * zr.weights[j] * (h.d_tt * h.d_tt + 2 * h.d_tz * h.d_tz + h.d_zz * h.d_zz);
        }
    EXPECT_NEAR(biharmonic_form(y, y), ref, 1e-10 * ref);
}

INSTANTIATE_TEST_SUITE_P(BothModes, BiharmonicTest,
                         ::testing::Values(BoundaryMode::ClampedAll, BoundaryMode::PeriodicTheta));

TEST(BiharmonicFormErrors, BasisMismatch) {
    auto a = std::make_shared<ShellBasis>(BoundaryMode::PeriodicTheta, 1, 4, 4.0);
    auto b = std::make_shared<ShellBasis>(BoundaryMode::PeriodicTheta, 1, 5, 4.0);
    EXPECT_THROW(biharmonic_form(ShellField::unit(a, 0), ShellField::unit(b, 0)), BasisMismatch);
}
