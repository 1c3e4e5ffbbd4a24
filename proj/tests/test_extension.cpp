#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "perifsi/errors.hpp"
#include "perifsi/extension.hpp"

using namespace perifsi;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct ExtensionFixture : ::testing::Test {
    CylinderConfig cyl;
    std::shared_ptr<const ShellBasis> basis = std::make_shared<ShellBasis>(BoundaryMode::PeriodicTheta, 3, 5, cyl.L);

    ShellField field(std::mt19937_64& rng, double scale) const {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Eigen::VectorXd c(basis->size());
        for (auto& v : c) v = scale * u(rng);
        return ShellField(basis, c);
    }
};

// Numeric surface sample for S(theta, z) given as a callable with partials.
SurfaceSample numeric_surface(const std::function<std::array<double, 3>(double, double)>& s, double L,
                              double theta, double z) {
    SurfaceSample out;
    const auto v = s(theta, z);
    out.S = v[0], out.S_theta = v[1], out.S_z = v[2];
    auto iz = [&](double t, double upto, int k) {
        return gauss_legendre(40, 0.0, upto).integrate([&](double zz) { return s(t, zz)[k]; });
    };
    out.Iz = iz(theta, z, 0);
    out.Iz_theta = iz(theta, z, 1);
    out.SL = iz(theta, L, 0);
    out.SL_theta = iz(theta, L, 1);
    out.ItL = gauss_legendre(40, 0.0, theta).integrate([&](double t) { return iz(t, L, 0); });
    out.mean = gauss_legendre(40, 0.0, kTwoPi).integrate([&](double t) { return iz(t, L, 0); }) / kTwoPi;
    return out;
}

}  // namespace

TEST_F(ExtensionFixture, RawExtendExamples) {
    std::mt19937_64 rng(2);
    const ShellField delta = field(rng, 0.03), xi = field(rng, 1.0);
    for (double t : {0.3, 2.9})
        for (double z : {0.8, 2.2}) {
            const double d = delta(t, z).value, x = xi(t, z).value;
            const Eigen::Vector3d at_interface = raw_extend(cyl, delta, xi, cyl.R + d, t, z);
            EXPECT_NEAR(at_interface[0], x, 1e-15 * (1 + std::abs(x)));
            EXPECT_EQ(at_interface[1], 0.0);
            EXPECT_EQ(at_interface[2], 0.0);
            EXPECT_EQ(raw_extend(cyl, delta, ShellField::zero(basis), 0.9, t, z).norm(), 0.0);
            const double half = std::nextafter(0.5 * cyl.R, 1.0);
            EXPECT_NEAR(raw_extend(cyl, delta, xi, half, t, z)[0], 2.0 * (cyl.R + d) * x / cyl.R, 1e-14);
        }
    EXPECT_THROW(raw_extend(cyl, delta, xi, 0.5 * cyl.R, 1.0, 1.0), RadiusOutOfRange);
    EXPECT_THROW(raw_extend(cyl, delta, xi, cyl.R + cyl.H, 1.0, 1.0), RadiusOutOfRange);
}

TEST_F(ExtensionFixture, InnerPlugExamples) {
    const ShellField zero = ShellField::zero(basis);
    EXPECT_EQ(build_inner_plug(cyl, zero, zero).kappa, 0.0);

    const ShellField xi = ShellField::unit(basis, 2);
    const InnerPlug plug = build_inner_plug(cyl, zero, xi);
    const auto tr = periodic_trapezoid(16, kTwoPi), zr = gauss_legendre(60, 0.0, cyl.L);
    double integral = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i)
        for (std::size_t j = 0; j < zr.size(); ++j) integral += tr.weights[i] * zr.weights[j] * xi(tr.nodes[i], zr.nodes[j]).value;
    EXPECT_NEAR(plug.disk_flux(), cyl.R * integral, 1e-10 * std::abs(cyl.R * integral));
    // Disk flux by radial quadrature of the profile itself.
    const double disk = kTwoPi * gauss_legendre(30, 0.0, 0.25 * cyl.R).integrate([&](double r) { return plug.a(r) * r; });
    EXPECT_NEAR(disk, plug.disk_flux(), 1e-12 * std::abs(disk));
    for (double r = 0.25 * cyl.R; r <= 0.5 * cyl.R; r += 0.01) EXPECT_EQ(plug.a(r), 0.0);
    EXPECT_EQ(plug.gamma(0.0), 1.0);
    EXPECT_EQ(plug.gamma(cyl.L), 0.0);
}

TEST(DivergenceCorrectorTest, ZeroSourceGivesZeroField) {
    const DivergenceCorrector corr(0.5, 4.0);
    const auto w = bogovskii_correct(corr, {});
    EXPECT_EQ(w(0.2, 1.0, 1.0).value.norm(), 0.0);
}

TEST(DivergenceCorrectorTest, RejectsNonZeroMean) {
    const DivergenceCorrector corr(0.5, 4.0);
    // f(r) = (1 - (2r)^2)^2 with integral over C scaled to 0.3.
    const double rad_edge = gauss_legendre(10, 0.0, 0.5).integrate([](double r) { return std::pow(1 - 4 * r * r, 2) * r; });
    const double c = 0.3 / (kTwoPi * 4.0 * rad_edge);
    SeparableTerm term{[](double r) {
                           return RadialSample{std::pow(1 - 4 * r * r, 2), -16 * r * (1 - 4 * r * r),
                                               gauss_legendre(10, 0.0, r).integrate([](double s) { return std::pow(1 - 4 * s * s, 2) * s; })};
                       },
                       [c](double theta, double z) {
                           return numeric_surface([c](double, double) { return std::array<double, 3>{c, 0.0, 0.0}; }, 4.0, theta, z);
                       }};
    EXPECT_NEAR(source_integral(corr, {term}), 0.3, 1e-12);
    EXPECT_THROW(bogovskii_correct(corr, {term}), NotMeanZero);
}

TEST(DivergenceCorrectorTest, RandomMeanZeroSourceIsInverted) {
    const double Rc = 0.5, L = 4.0;
    const DivergenceCorrector corr(Rc, L);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<SeparableTerm> terms;
        std::vector<double> amp_edge;
        for (int i = 0; i < 3; ++i) {
            const double c0 = u(rng), c1 = u(rng), amp = u(rng), ph = u(rng);
            const int m = i, k = i + 1;
            auto f = [=](double r) {
                const double b = 1 - r * r / (Rc * Rc);
                return std::array<double, 2>{b * b * (c0 + c1 * r * r),
                                             2 * b * (-2 * r / (Rc * Rc)) * (c0 + c1 * r * r) + b * b * 2 * c1 * r};
            };
            auto radial = [=](double r) {
                const auto v = f(r);
                return RadialSample{v[0], v[1], gauss_legendre(12, 0.0, r).integrate([&](double s) { return f(s)[0] * s; })};
            };
            auto s = [=](double t, double z) {
                const double ang = std::cos(m * t + ph), dang = -m * std::sin(m * t + ph);
                const double zz = std::cos(k * std::numbers::pi * z / L) + 0.3 * z, dzz = -k * std::numbers::pi / L * std::sin(k * std::numbers::pi * z / L) + 0.3;
                return std::array<double, 3>{amp * ang * zz, amp * dang * zz, amp * ang * dzz};
            };
            terms.push_back({radial, [=](double t, double z) { return numeric_surface(s, L, t, z); }});
        }
        // Remove the mean with a constant-surface term on the first radial profile.
        const double total = source_integral(corr, terms);
        const double rad0 = terms[0].radial(Rc).rad;
        const double c = -total / (kTwoPi * L * rad0);
        terms.push_back({terms[0].radial, [=](double t, double z) {
                             return numeric_surface([c](double, double) { return std::array<double, 3>{c, 0, 0}; }, L, t, z);
                         }});
        const auto w = bogovskii_correct(corr, terms);
        double max_res = 0.0, max_src = 0.0;
        for (double r : {0.05, 0.17, 0.31, 0.44})
            for (double t : {0.0, 1.9, 4.1})
                for (double z : {0.3, 1.7, 3.6}) {
                    double src = 0.0;
                    for (const auto& term : terms) src += term.radial(r).f * term.surface(t, z).S;
                    max_src = std::max(max_src, std::abs(src));
                    max_res = std::max(max_res, std::abs(divergence(w(r, t, z), r) - src));
                }
        EXPECT_LE(max_res, 1e-6 * max_src);
        EXPECT_LE(max_res, 1e-11 * max_src);
        for (double t : {0.5, 3.0})
            for (double z : {0.7, 2.0}) EXPECT_LE(w(Rc, t, z).value.norm(), 1e-12);
        for (double r : {0.1, 0.4}) {
            EXPECT_LE(w(r, 1.0, 0.0).value.norm(), 1e-12);
            EXPECT_LE(w(r, 1.0, L).value.norm(), 1e-12);
        }
    }
}

TEST_F(ExtensionFixture, TraceInletAndDivergence) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 5; ++trial) {
        const ShellField delta = field(rng, 0.05), xi = field(rng, 1.0);
        const ExtensionField f = extend(cyl, delta, xi);
        const double xi_sup = sampled_sup_norm(xi);
        for (double t : {0.0, 1.1, 2.5, 5.0})
            for (double z : {0.2, 1.3, 2.0, 3.7}) {
                const double d = delta(t, z).value;
                const CylJet tr = f(cyl.R + d, t, z);
                EXPECT_LE((tr.value - Eigen::Vector3d(xi(t, z).value, 0, 0)).norm(), 1e-13 * xi_sup);
                for (double r : {0.03, 0.12, 0.26, 0.41, 0.49, 0.51, 0.8, cyl.R + d})
                    EXPECT_LE(std::abs(divergence(f(r, t, z), r)), 1e-10 * xi_sup) << r << " " << t << " " << z;
            }
        for (double r : {0.05, 0.3, 0.7})
            for (double z : {0.0, cyl.L}) {
                const CylJet v = f(r, 0.9, z);
                EXPECT_LE(std::hypot(v.value[0], v.value[1]), 1e-13 * xi_sup);
            }
    }
}

TEST_F(ExtensionFixture, PartialsMatchFiniteDifferences) {
    std::mt19937_64 rng(8);
    const ShellField delta = field(rng, 0.05), xi = field(rng, 1.0);
    const ExtensionField f = extend(cyl, delta, xi);
    const double h = 1e-6;
    for (double r : {0.07, 0.2, 0.33, 0.47, 0.7, 0.95})
        for (double t : {0.4, 3.3})
            for (double z : {0.9, 2.8}) {
                const CylJet j = f(r, t, z);
                const std::array<Eigen::Vector3d, 3> fd{(f(r + h, t, z).value - f(r - h, t, z).value) / (2 * h),
                                                        (f(r, t + h, z).value - f(r, t - h, z).value) / (2 * h),
                                                        (f(r, t, z + h).value - f(r, t, z - h).value) / (2 * h)};
                for (int d = 0; d < 3; ++d) EXPECT_LE((j.partial.col(d) - fd[d]).norm(), 1e-6 * (1 + j.partial.norm()));
            }
}

TEST_F(ExtensionFixture, ContinuousAcrossInnerRadius) {
    std::mt19937_64 rng(12);
    const ShellField delta = field(rng, 0.05), xi = field(rng, 1.0);
    const ExtensionField f = extend(cyl, delta, xi);
    const double rc = 0.5 * cyl.R;
    for (double t : {0.4, 3.3})
        for (double z : {0.9, 2.8}) {
            const CylJet in = f(std::nextafter(rc, 0.0), t, z), out = f(rc, t, z);
            EXPECT_LE((in.value - out.value).norm(), 1e-12);
            EXPECT_LE((in.partial - out.partial).norm(), 1e-10);
        }
}

TEST_F(ExtensionFixture, LinearInXi) {
    std::mt19937_64 rng(5);
    const ShellField delta = field(rng, 0.05), x1 = field(rng, 1.0), x2 = field(rng, 1.0);
    const ExtensionField f1 = extend(cyl, delta, x1), f2 = extend(cyl, delta, x2);
    const ExtensionField f12 = extend(cyl, delta, x1 * 2.0 + x2 * -0.5);
    for (double r : {0.1, 0.45, 0.9})
        for (double z : {0.5, 3.1}) {
            const CylJet a = f12(r, 1.0, z), b = f1(r, 1.0, z) * 2.0 + f2(r, 1.0, z) * -0.5;
            EXPECT_LE((a.value - b.value).norm(), 1e-13);
            EXPECT_LE((a.partial - b.partial).norm(), 1e-12);
        }
    EXPECT_EQ(extend(cyl, delta, ShellField::zero(basis))(0.3, 1.0, 1.0).value.norm(), 0.0);
}

TEST_F(ExtensionFixture, RateIsTimeDerivative) {
    std::mt19937_64 rng(6);
    const ShellField delta = field(rng, 0.05), rate = field(rng, 0.1), xi = field(rng, 1.0);
    const ExtensionField dt = extend_rate(cyl, rate, xi);
    const double h = 1e-4;
    const ExtensionField fp = extend(cyl, delta + rate * h, xi), fm = extend(cyl, delta - rate * h, xi);
    for (double r : {0.1, 0.3, 0.45, 0.8})
        for (double z : {0.5, 3.1}) {
            const Eigen::Vector3d fd = (fp(r, 2.0, z).value - fm(r, 2.0, z).value) / (2 * h);
            EXPECT_LE((dt(r, 2.0, z).value - fd).norm(), 1e-9);
        }
}

TEST_F(ExtensionFixture, RejectsInadmissibleDisplacement) {
    const ShellField xi = ShellField::unit(basis, 0);
    const double peak = sampled_sup_norm(xi);
    EXPECT_THROW(extend(cyl, xi * (-0.6 * cyl.R / peak), xi), DomainViolation);
    EXPECT_THROW(extend(cyl, xi * (0.6 * cyl.H / peak), xi), DomainViolation);
    EXPECT_NO_THROW(extend(cyl, xi * (0.4 * cyl.H / peak), xi));
}
