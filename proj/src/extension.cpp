#include "perifsi/extension.hpp"

#include <cmath>
#include <numbers>

#include "perifsi/errors.hpp"

namespace perifsi {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double AxialProfile::p(double z) const {
    const double s = z / L;
    return 30.0 * s * s * (1.0 - s) * (1.0 - s) / L;
}

double AxialProfile::dp(double z) const {
    const double s = z / L;
    return 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s) / (L * L);
}

double AxialProfile::P(double z) const {
    const double s = z / L;
    return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

CylJet DivergenceCorrector::evaluate(std::span<const RadialSample> radial, std::span<const SurfaceSample> surface,
                                     double r, double theta, double z) const {
    const double p = axial_.p(z), dp = axial_.dp(z), Pz = axial_.P(z);
    double wz = 0.0, wz_r = 0.0, wz_t = 0.0, wz_z = 0.0;
    double m = 0.0, mf = 0.0;
    double tt = 0.0, tt_r = 0.0, tt_t = 0.0;
    for (std::size_t i = 0; i < radial.size(); ++i) {
        const RadialSample& f = radial[i];
        const SurfaceSample& s = surface[i];
        const double zpart = s.Iz - s.SL * Pz;
        wz += f.f * zpart;
        wz_r += f.df * zpart;
        wz_t += f.f * (s.Iz_theta - s.SL_theta * Pz);
        wz_z += f.f * (s.S - s.SL * p);
        m += s.mean * f.rad;
        mf += s.mean * f.f;
        const double tpart = s.ItL - theta * s.mean;
        tt += f.f * tpart;
        tt_r += f.df * tpart;
        tt_t += f.f * (s.SL - s.mean);
    }
    CylJet w;
    w.value = {p * m / r, p * r * tt, wz};
    w.partial << p * (mf - m / (r * r)), 0.0, dp * m / r,
                 p * (tt + r * tt_r), p * r * tt_t, dp * r * tt,
                 wz_r, wz_t, wz_z;
    return w;
}

double source_integral(const DivergenceCorrector& corrector, const std::vector<SeparableTerm>& source) {
    double total = 0.0;
    for (const auto& term : source)
        total += kTwoPi * term.radial(corrector.radius()).rad * term.surface(0.0, 0.0).mean;
    return total;
}

VectorField bogovskii_correct(const DivergenceCorrector& corrector, std::vector<SeparableTerm> source) {
    double scale = 0.0;
    for (const auto& term : source) {
        const RadialSample edge = term.radial(corrector.radius());
        scale += std::abs(kTwoPi * edge.rad * term.surface(0.0, 0.0).mean);
        if (std::abs(edge.f) > 1e-12) throw UnsupportedSource("source does not vanish on the lateral wall of C");
    }
    const double total = source_integral(corrector, source);
    if (std::abs(total) > 1e-10 * scale) throw NotMeanZero("integral of the source over C is " + std::to_string(total));
    return [corrector, source = std::move(source)](double r, double theta, double z) {
        std::vector<RadialSample> rs;
        std::vector<SurfaceSample> ss;
        for (const auto& term : source) {
            rs.push_back(term.radial(r));
            ss.push_back(term.surface(theta, z));
        }
        return corrector.evaluate(rs, ss, r, theta, z);
    };
}

FluxDensity::FluxDensity(const ShellBasis& b, double base_, const Eigen::VectorXd& delta_c, const Eigen::VectorXd& xi_c)
    : basis(&b), base(base_) {
    if (delta_c.size() != b.size() || xi_c.size() != b.size()) throw BasisMismatch("flux density coefficients");
    delta = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        delta_c.data(), b.n_theta(), b.n_z());
    xi = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        xi_c.data(), b.n_theta(), b.n_z());
}

ColumnTables::ColumnTables(const ShellBasis& basis, double theta, double z) : theta_(theta), z_(z) {
    const auto& tf = basis.theta_family();
    const auto& zf = basis.z_family();
    const int nt = tf.size(), nz = zf.size();
    t.resize(nt), dt.resize(nt), it.resize(nt), itt.resize(nt, nt);
    zv.resize(nz), dz.resize(nz), iz.resize(nz), izz.resize(nz, nz);
    for (int a = 0; a < nt; ++a) {
        const Jet1D j = tf.eval(a, theta);
        t[a] = j[0], dt[a] = j[1], it[a] = tf.integral(a, theta);
        for (int c = 0; c <= a; ++c) itt(a, c) = itt(c, a) = tf.product_integral(a, c, theta);
    }
    for (int b = 0; b < nz; ++b) {
        const Jet1D j = zf.eval(b, z);
        zv[b] = j[0], dz[b] = j[1], iz[b] = zf.integral(b, z);
        for (int d = 0; d <= b; ++d) izz(b, d) = izz(d, b) = zf.product_integral(b, d, z);
    }
}

FullIntegrals::FullIntegrals(const ShellBasis& basis) {
    const ColumnTables c(basis, kTwoPi, basis.length());
    it2pi = c.it;
    itt2pi = c.itt;
    izL = c.iz;
    izzL = c.izz;
}

SurfaceData surface_data(const FluxDensity& f, const ColumnTables& col, const FullIntegrals& full) {
    SurfaceData s;
    const Eigen::VectorXd xi_z = f.xi * col.zv;
    const Eigen::VectorXd xi_dz = f.xi * col.dz;
    const double xv = col.t.dot(xi_z), x_t = col.dt.dot(xi_z), x_z = col.t.dot(xi_dz);
    const Eigen::VectorXd de_z = f.delta * col.zv;
    const double dv = col.t.dot(de_z), d_t = col.dt.dot(de_z), d_z = col.t.dot(f.delta * col.dz);
    const double lam = f.base + dv;
    s.g = lam * xv;
    s.g_theta = d_t * xv + lam * x_t;
    s.g_z = d_z * xv + lam * x_z;

    const Eigen::MatrixXd p = f.xi * col.izz * f.delta.transpose();
    const Eigen::VectorXd q = f.xi * col.iz;
    s.G = f.base * col.t.dot(q) + col.t.dot(p * col.t);
    s.G_theta = f.base * col.dt.dot(q) + col.dt.dot(p * col.t) + col.t.dot(p * col.dt);

    const Eigen::MatrixXd pl = f.xi * full.izzL * f.delta.transpose();
    const Eigen::VectorXd ql = f.xi * full.izL;
    s.gL = f.base * col.t.dot(ql) + col.t.dot(pl * col.t);
    s.gL_theta = f.base * col.dt.dot(ql) + col.dt.dot(pl * col.t) + col.t.dot(pl * col.dt);
    s.ItL = f.base * col.it.dot(ql) + col.itt.cwiseProduct(pl).sum();
    s.mean = (f.base * full.it2pi.dot(ql) + full.itt2pi.cwiseProduct(pl).sum()) / kTwoPi;
    return s;
}

double InnerProfiles::q(double r) const {
    if (r >= 0.5 * R) return 1.0;
    const double y = 4.0 * r * r / (R * R);
    return y * (3.0 - 3.0 * y + y * y);
}

double InnerProfiles::sigma(double r) const {
    if (r >= 0.5 * R) return 0.0;
    const double y = 4.0 * r * r / (R * R);
    return 24.0 * (1.0 - y) * (1.0 - y) / (R * R);
}

double InnerProfiles::dsigma(double r) const {
    if (r >= 0.5 * R) return 0.0;
    const double y = 4.0 * r * r / (R * R);
    return -384.0 * r * (1.0 - y) / (R * R * R * R);
}

double InnerProfiles::rho(double r) const {
    if (r >= 0.5 * R) return 1.0 / r;
    const double y = 4.0 * r * r / (R * R);
    return 4.0 * r / (R * R) * (3.0 - 3.0 * y + y * y);
}

double InnerProfiles::drho(double r) const {
    if (r >= 0.5 * R) return -1.0 / (r * r);
    const double y = 4.0 * r * r / (R * R);
    return sigma(r) - 4.0 / (R * R) * (3.0 - 3.0 * y + y * y);
}

double InnerProfiles::a(double r) const {
    if (r >= 0.25 * R) return 0.0;
    const double u = 16.0 * r * r / (R * R);
    return (1.0 - u) * (1.0 - u) * (1.0 - u);
}

double InnerProfiles::da(double r) const {
    if (r >= 0.25 * R) return 0.0;
    const double u = 16.0 * r * r / (R * R);
    return -96.0 * r * (1.0 - u) * (1.0 - u) / (R * R);
}

double InnerProfiles::A(double r) const {
    if (r >= 0.25 * R) return A_total();
    const double u = 16.0 * r * r / (R * R);
    return A_total() * (1.0 - std::pow(1.0 - u, 4));
}

InnerPlug build_inner_plug(const CylinderConfig& cyl, const ShellField& delta, const ShellField& xi) {
    require_same_basis(delta, xi);
    const FluxDensity f(xi.basis(), cyl.R, delta.coefficients(), xi.coefficients());
    const FullIntegrals full(xi.basis());
    const ColumnTables col(xi.basis(), 0.0, 0.0);
    const SurfaceData s = surface_data(f, col, full);
    InnerPlug plug{0.0, kTwoPi * s.mean, InnerProfiles{cyl.R}, AxialProfile{cyl.L}};
    plug.kappa = s.mean / plug.profiles.A_total();
    return plug;
}

Eigen::Vector3d raw_extend(const CylinderConfig& cyl, const ShellField& delta, const ShellField& xi, double r,
                           double theta, double z) {
    require_same_basis(delta, xi);
    if (!(r > 0.5 * cyl.R && r <= cyl.R + 0.5 * cyl.H))
        throw RadiusOutOfRange("raw_extend: r = " + std::to_string(r));
    const double d = delta(theta, z).value;
    return {(cyl.R + d) / r * xi(theta, z).value, 0.0, 0.0};
}

ExtensionField::ExtensionField(const CylinderConfig& cyl, FluxDensity flux)
    : cyl_(cyl),
      flux_(std::move(flux)),
      full_(*flux_.basis),
      prof_{cyl.R},
      corrector_(0.5 * cyl.R, cyl.L) {
    const ColumnTables col(*flux_.basis, 0.0, 0.0);
    full_mean_ = surface_data(flux_, col, full_).mean;
}

SurfaceData ExtensionField::surface(double theta, double z) const {
    return surface_data(flux_, ColumnTables(*flux_.basis, theta, z), full_);
}

CylJet ExtensionField::evaluate(const SurfaceData& s, double r, double theta, double z) const {
    if (!(r > 0.0 && r <= cyl_.R + 0.5 * cyl_.H)) throw RadiusOutOfRange("extension: r = " + std::to_string(r));
    CylJet out;
    if (r >= 0.5 * cyl_.R) {
        out.value[0] = s.g / r;
        out.partial(0, 0) = -s.g / (r * r);
        out.partial(0, 1) = s.g_theta / r;
        out.partial(0, 2) = s.g_z / r;
        return out;
    }
    // Smooth continuation of the radial field plus the axial plug.
    const double kappa = s.mean / prof_.A_total();
    const AxialProfile& ax = corrector_.axial();
    const double rho = prof_.rho(r), a = kappa * prof_.a(r), gamma = 1.0 - ax.P(z);
    out.value = {rho * s.g, 0.0, a * gamma};
    out.partial(0, 0) = prof_.drho(r) * s.g;
    out.partial(0, 1) = rho * s.g_theta;
    out.partial(0, 2) = rho * s.g_z;
    out.partial(2, 0) = kappa * prof_.da(r) * gamma;
    out.partial(2, 2) = -a * ax.p(z);

    // Its divergence sigma(r) g + a(r) gamma'(z) is removed by the corrector.
    const std::array<RadialSample, 2> radial{
        RadialSample{prof_.sigma(r), prof_.dsigma(r), prof_.q(r)},
        RadialSample{a, kappa * prof_.da(r), kappa * prof_.A(r)}};
    const std::array<SurfaceSample, 2> surface{
        SurfaceSample{s.g, s.g_theta, s.g_z, s.G, s.G_theta, s.gL, s.gL_theta, s.ItL, s.mean},
        SurfaceSample{-ax.p(z), 0.0, -ax.dp(z), -ax.P(z), 0.0, -1.0, 0.0, -theta, -1.0}};
    return out - corrector_.evaluate(radial, surface, r, theta, z);
}

VectorField ExtensionField::as_field() const {
    return [self = *this](double r, double theta, double z) { return self(r, theta, z); };
}

void require_extension_domain(const CylinderConfig& cyl, const ShellField& delta, double margin) {
    if (!check_injectivity(cyl, delta, margin)) throw DomainViolation("displacement breaks injectivity");
    const auto [lo, hi] = sampled_range(delta);
    if (!(lo > -0.5 * cyl.R)) throw DomainViolation("interface enters the inner cylinder r < R/2");
    if (!(hi <= 0.5 * cyl.H)) throw DomainViolation("interface beyond R + H/2");
}

ExtensionField extend(const CylinderConfig& cyl, const ShellField& delta, const ShellField& xi, double margin) {
    require_same_basis(delta, xi);
    require_extension_domain(cyl, delta, margin);
    return ExtensionField(cyl, FluxDensity(xi.basis(), cyl.R, delta.coefficients(), xi.coefficients()));
}

ExtensionField extend(const CylinderConfig& cyl, const ShellField& delta, const ShellField& xi) {
    return extend(cyl, delta, xi, cyl.default_margin());
}

ExtensionField extend_rate(const CylinderConfig& cyl, const ShellField& delta_rate, const ShellField& xi) {
    require_same_basis(delta_rate, xi);
    return ExtensionField(cyl, FluxDensity(xi.basis(), 0.0, delta_rate.coefficients(), xi.coefficients()));
}

}  // namespace perifsi
