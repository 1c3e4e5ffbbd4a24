#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

#include "perifsi/cyl_field.hpp"
#include "perifsi/geometry.hpp"
#include "perifsi/shell.hpp"

namespace perifsi {

// Fixed axial profile p(z) >= 0 with unit integral, vanishing with its first
// derivative at both ends; P is its antiderivative from 0.
struct AxialProfile {
    double L;
    double p(double z) const;
    double dp(double z) const;
    double P(double z) const;
};

// One separable source term f(r) S(theta, z) sampled at a fixed (theta, z).
struct RadialSample {
    double f = 0.0, df = 0.0;
    double rad = 0.0;  // integral_0^r f(s) s ds
};
struct SurfaceSample {
    double S = 0.0, S_theta = 0.0, S_z = 0.0;
    double Iz = 0.0, Iz_theta = 0.0;  // integral_0^z S, and its theta-derivative
    double SL = 0.0, SL_theta = 0.0;  // integral_0^L S, and its theta-derivative
    double ItL = 0.0;                 // integral_0^theta SL
    double mean = 0.0;                // (1/2pi) integral_0^2pi SL
};

struct SeparableTerm {
    std::function<RadialSample(double r)> radial;
    std::function<SurfaceSample(double theta, double z)> surface;
};

// Right inverse of the divergence on the inner cylinder C = {r < R/2} x (0, L)
// for sources sum_i f_i(r) S_i(theta, z) with f_i(R/2) = 0 and zero total
// integral. The output vanishes on the lateral wall and the end disks.
class DivergenceCorrector {
public:
    DivergenceCorrector(double radius, double length) : radius_(radius), axial_{length} {}

    double radius() const { return radius_; }
    const AxialProfile& axial() const { return axial_; }

    // Field at (r, theta, z) from samples of each term taken at that point.
    CylJet evaluate(std::span<const RadialSample> radial, std::span<const SurfaceSample> surface, double r,
                    double theta, double z) const;

private:
    double radius_;
    AxialProfile axial_;
};

// Throws NotMeanZero / UnsupportedSource on violated preconditions.
VectorField bogovskii_correct(const DivergenceCorrector& corrector, std::vector<SeparableTerm> source);

// Integral of the source over C.
double source_integral(const DivergenceCorrector& corrector, const std::vector<SeparableTerm>& source);

// Flux density g = (base + delta) * xi on omega, with delta and xi given by
// coefficients on a common shell basis. base = R for the extension itself and
// 0 for its time derivative (delta -> d delta/dt).
struct FluxDensity {
    const ShellBasis* basis = nullptr;
    double base = 0.0;
    Eigen::MatrixXd delta;  // n_theta x n_z coefficient grid
    Eigen::MatrixXd xi;

    FluxDensity() = default;
    FluxDensity(const ShellBasis& b, double base_, const Eigen::VectorXd& delta_c, const Eigen::VectorXd& xi_c);
};

// Everything the extension needs from g at a fixed (theta, z).
struct SurfaceData {
    double g = 0.0, g_theta = 0.0, g_z = 0.0;
    double G = 0.0, G_theta = 0.0;  // integral_0^z g
    double gL = 0.0, gL_theta = 0.0;
    double ItL = 0.0;               // integral_0^theta gL
    double mean = 0.0;              // (1/2pi) integral over omega of g
};

// Basis tables at a fixed (theta, z), shared by every flux density.
class ColumnTables {
public:
    ColumnTables(const ShellBasis& basis, double theta, double z);

    double theta() const { return theta_; }
    double z() const { return z_; }
    Eigen::VectorXd t, dt, it;       // Theta_a, Theta_a', integral_0^theta Theta_a
    Eigen::MatrixXd itt;             // integral_0^theta Theta_a Theta_c
    Eigen::VectorXd zv, dz, iz;      // Z_b, Z_b', integral_0^z Z_b
    Eigen::MatrixXd izz;             // integral_0^z Z_b Z_d

private:
    double theta_, z_;
};

// Per-basis constants (integrals over the full period / length).
class FullIntegrals {
public:
    explicit FullIntegrals(const ShellBasis& basis);
    Eigen::VectorXd it2pi, izL;
    Eigen::MatrixXd itt2pi, izzL;
};

SurfaceData surface_data(const FluxDensity& g, const ColumnTables& col, const FullIntegrals& full);

// Smooth radial profiles of the inner region.
struct InnerProfiles {
    double R;
    // q(r) = 1 - (1 - y)^3, y = (2r/R)^2 on [0, R/2], 1 beyond; sigma = q'/r.
    double q(double r) const;
    double sigma(double r) const;
    double dsigma(double r) const;
    double rho(double r) const;   // q / r
    double drho(double r) const;
    // Plug a(r) = (1 - (4r/R)^2)^3 on [0, R/4]; A(r) = integral_0^r a s ds.
    double a(double r) const;
    double da(double r) const;
    double A(double r) const;
    double A_total() const { return R * R / 128.0; }
};

struct InnerPlug {
    double kappa = 0.0;        // plug amplitude
    double total_flux = 0.0;   // integral over omega of (R + delta) xi
    InnerProfiles profiles;
    AxialProfile axial;

    double a(double r) const { return kappa * profiles.a(r); }
    double gamma(double z) const { return 1.0 - axial.P(z); }
    // 2 pi integral_0^{R/2} a(r) r dr
    double disk_flux() const { return 2.0 * 3.14159265358979323846 * kappa * profiles.A_total(); }
};

InnerPlug build_inner_plug(const CylinderConfig& cyl, const ShellField& delta, const ShellField& xi);

// ((R + delta)/r) xi e_r for r in (R/2, R + H/2].
Eigen::Vector3d raw_extend(const CylinderConfig& cyl, const ShellField& delta, const ShellField& xi, double r,
                           double theta, double z);

// Divergence-free extension of xi e_r from the interface r = R + delta into the
// fluid region, purely axial on the end disks.
class ExtensionField {
public:
    ExtensionField(const CylinderConfig& cyl, FluxDensity flux);

    const CylinderConfig& cylinder() const { return cyl_; }
    const FluxDensity& flux() const { return flux_; }
    double flux_budget() const { return full_mean_; }

    SurfaceData surface(double theta, double z) const;
    CylJet evaluate(const SurfaceData& s, double r, double theta, double z) const;
    CylJet operator()(double r, double theta, double z) const { return evaluate(surface(theta, z), r, theta, z); }
    VectorField as_field() const;

private:
    CylinderConfig cyl_;
    FluxDensity flux_;
    FullIntegrals full_;
    InnerProfiles prof_;
    DivergenceCorrector corrector_;
    double full_mean_;
};

// Checks the admissible range of delta (injectivity and R/2 < R + delta <= R + H/2).
void require_extension_domain(const CylinderConfig& cyl, const ShellField& delta, double margin);

ExtensionField extend(const CylinderConfig& cyl, const ShellField& delta, const ShellField& xi, double margin);
ExtensionField extend(const CylinderConfig& cyl, const ShellField& delta, const ShellField& xi);
// Eulerian time derivative of extend(cyl, delta(t), xi) given d delta/dt.
ExtensionField extend_rate(const CylinderConfig& cyl, const ShellField& delta_rate, const ShellField& xi);

}  // namespace perifsi
