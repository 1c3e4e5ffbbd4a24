#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "perifsi/errors.hpp"
#include "perifsi/piola.hpp"
#include "perifsi/quadrature.hpp"
#include "perifsi/stokes.hpp"

using namespace perifsi;

namespace {

constexpr double kPi = std::numbers::pi;

struct StokesFixture : ::testing::Test {
    CylinderConfig cyl;
    StokesBasis stokes{cyl, {}, 16};
};

TEST_F(StokesFixture, ModesAreDivergenceFree) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ur(0.01, cyl.R), uz(0.0, cyl.L);
    for (int k = 0; k < stokes.size(); ++k)
        for (int n = 0; n < 20; ++n) {
            const double r = ur(rng), z = uz(rng);
            const CylJet f = stokes.mode(k, r, 0.3, z);
            EXPECT_LE(std::abs(divergence(f, r)), 1e-8 * (1.0 + f.partial.norm())) << k;
        }
}

TEST_F(StokesFixture, TracesVanish) {
    for (int k = 0; k < stokes.size(); ++k)
        for (double z : {0.0, 0.7, 2.0, 3.9}) EXPECT_LE(stokes.mode(k, cyl.R, 0.0, z).value.norm(), 1e-8);
    for (int k = 0; k < stokes.size(); ++k)
        for (double r : {0.1, 0.5, 0.9})
            for (double z : {0.0, cyl.L}) {
                const CylJet f = stokes.mode(k, r, 0.0, z);
                EXPECT_LE(std::abs(f.value[0]) + std::abs(f.value[1]), 1e-8);
            }
}

TEST_F(StokesFixture, OrthonormalAndAscending) {
    const auto rr = gauss_legendre(30, 0.0, cyl.R), zr = gauss_legendre(60, 0.0, cyl.L);
    const int n = stokes.size();
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < rr.size(); ++i)
        for (std::size_t j = 0; j < zr.size(); ++j) {
            const double w = 2.0 * kPi * rr.nodes[i] * rr.weights[i] * zr.weights[j];
            std::vector<Eigen::Vector3d> v(n);
            for (int k = 0; k < n; ++k) v[k] = stokes.mode(k, rr.nodes[i], 0.0, zr.nodes[j]).value;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) gram(a, b) += w * v[a].dot(v[b]);
        }
    EXPECT_LE((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-10);
    const auto& ev = stokes.eigenvalues();
    EXPECT_GT(ev[0], 0.0);
    for (int k = 1; k < n; ++k) EXPECT_GE(ev[k], ev[k - 1]);
}

TEST_F(StokesFixture, RejectsBadRequests) {
    EXPECT_THROW(StokesBasis(cyl, {}, 0), ValidationError);
    EXPECT_THROW(StokesBasis(cyl, {2, 1}, 7), ValidationError);
    EXPECT_THROW(stokes.mode(stokes.size(), 0.5, 0.0, 1.0), IndexOutOfRange);
}

struct PiolaFixture : StokesFixture {
    std::shared_ptr<const ShellBasis> basis = std::make_shared<ShellBasis>(BoundaryMode::PeriodicTheta, 3, 4, cyl.L);

    ShellField random_shell(std::uint64_t seed, double scale) const {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Eigen::VectorXd c(basis->size());
        for (auto& v : c) v = scale * u(rng);
        return ShellField(basis, c);
    }

    // Reference field with swirl and theta dependence so every Piola term is exercised.
    static CylJet twisted(double r, double theta, double z) {
        CylJet f;
        const double s = r * r, g = (1.0 - s) * std::sin(z);
        f.value = {g * std::cos(theta), r * g, (1.0 - s) * std::cos(z) * std::sin(theta)};
        f.partial << -2.0 * r * std::sin(z) * std::cos(theta), -g * std::sin(theta), (1.0 - s) * std::cos(z) * std::cos(theta),
            (1.0 - 3.0 * s) * std::sin(z), 0.0, r * (1.0 - s) * std::cos(z),
            -2.0 * r * std::cos(z) * std::sin(theta), (1.0 - s) * std::cos(z) * std::cos(theta), -(1.0 - s) * std::sin(z) * std::sin(theta);
        return f;
    }
};

TEST_F(PiolaFixture, IdentityAtZeroDisplacement) {
    const VectorField ref = stokes.mode_field(2);
    const VectorField pushed = piola(cyl, ShellField::zero(basis), ref);
    for (double r : {0.2, 0.6, 0.95}) {
        const CylJet a = ref(r, 1.0, 1.3), b = pushed(r, 1.0, 1.3);
        EXPECT_LE((a.value - b.value).norm(), 1e-14);
        EXPECT_LE((a.partial - b.partial).norm(), 1e-13);
    }
}

TEST_F(PiolaFixture, PreservesZeroTraceAndDivergence) {
    const ShellField eta = random_shell(5, 0.04);
    for (int k : {0, 3, 9}) {
        const VectorField pushed = piola(cyl, eta, stokes.mode_field(k));
        for (double theta : {0.0, 1.1, 4.0})
            for (double z : {0.3, 1.7, 3.2}) {
                const double top = cyl.R + eta(theta, z).value;
                EXPECT_LE(pushed(top, theta, z).value.norm(), 1e-8);
                for (double frac : {0.1, 0.5, 0.9}) {
                    const double r = frac * top;
                    const CylJet f = pushed(r, theta, z);
                    EXPECT_LE(std::abs(divergence(f, r)), 1e-8 * (1.0 + f.partial.norm()));
                }
            }
    }
}

TEST_F(PiolaFixture, PartialsMatchFiniteDifferences) {
    const ShellField eta = random_shell(8, 0.05);
    const VectorField pushed = piola(cyl, eta, twisted);
    const double h = 1e-6;
    for (double r : {0.3, 0.7})
        for (double theta : {0.4, 2.5}) {
            const double z = 1.4;
            const CylJet f = pushed(r, theta, z);
            const Eigen::Vector3d dr = (pushed(r + h, theta, z).value - pushed(r - h, theta, z).value) / (2 * h);
            const Eigen::Vector3d dt = (pushed(r, theta + h, z).value - pushed(r, theta - h, z).value) / (2 * h);
            const Eigen::Vector3d dz = (pushed(r, theta, z + h).value - pushed(r, theta, z - h).value) / (2 * h);
            EXPECT_LE((f.partial.col(0) - dr).norm(), 1e-7);
            EXPECT_LE((f.partial.col(1) - dt).norm(), 1e-7);
            EXPECT_LE((f.partial.col(2) - dz).norm(), 1e-7);
        }
}

// Flux through any cross-section is preserved: the Piola map carries the
// reference axial flux over the deformed disk.
TEST_F(PiolaFixture, CrossSectionFluxPreserved) {
    const ShellField eta = random_shell(11, 0.05);
    const VectorField ref = stokes.mode_field(0);
    const VectorField pushed = piola(cyl, eta, ref);
    const auto th = periodic_trapezoid(64, 2.0 * kPi);
    for (double z : {0.8, 2.1}) {
        double ref_flux = 0.0, flux = 0.0;
        for (std::size_t j = 0; j < th.size(); ++j) {
            const double top = cyl.R + eta(th.nodes[j], z).value;
            const auto rr = gauss_legendre(24, 0.0, top), r0 = gauss_legendre(24, 0.0, cyl.R);
            for (std::size_t i = 0; i < rr.size(); ++i) {
                flux += th.weights[j] * rr.weights[i] * rr.nodes[i] * pushed(rr.nodes[i], th.nodes[j], z).value[2];
                ref_flux += th.weights[j] * r0.weights[i] * r0.nodes[i] * ref(r0.nodes[i], th.nodes[j], z).value[2];
            }
        }
        EXPECT_NEAR(flux, ref_flux, 1e-10 * (1.0 + std::abs(ref_flux)));
    }
}

TEST_F(PiolaFixture, RateIsEulerianTimeDerivative) {
    const ShellField base = random_shell(13, 0.04), dir = random_shell(14, 0.04);
    const double r = 0.6, theta = 0.9, z = 2.3, h = 1e-6;
    auto at = [&](double t) {
        const ShellJet d = (base + dir * t)(theta, z);
        return piola_apply(cyl.R, d, dir(theta, z), twisted(reference_radius(cyl.R, d, r), theta, z), r);
    };
    const PiolaJet mid = at(0.0);
    const Eigen::Vector3d fd = (at(h).field.value - at(-h).field.value) / (2 * h);
    EXPECT_LE((mid.rate - fd).norm(), 1e-7);
}

TEST_F(PiolaFixture, RejectsInadmissibleDisplacement) {
    EXPECT_THROW(piola(cyl, ShellField::unit(basis, 0) * (-5.0), stokes.mode_field(0)), DomainViolation);
}

}  // namespace
