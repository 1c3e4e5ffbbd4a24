#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "perifsi/extension.hpp"
#include "perifsi/fluid_domain.hpp"
#include "perifsi/forcing.hpp"
#include "perifsi/parallel.hpp"
#include "perifsi/solid.hpp"
#include "perifsi/stokes.hpp"

namespace perifsi {

// Everything needed to build the coupled basis.
struct Discretization {
    CylinderConfig cyl;
    SolidParams solid;
    BoundaryMode boundary = BoundaryMode::PeriodicTheta;
    int n_theta = 1;
    int n_z = 8;
    int fluid_per_panel = 8;   // radial Gauss points per fluid panel
    int solid_radial = 4;      // radial polynomial degree of solid interior candidates
    int n_interior = 16;       // interior modes per field (fluid and solid)
    StokesResolution stokes;
    int oversample = 1;        // surface quadrature oversampling
    double margin = -1.0;      // injectivity margin, negative = default

    double injectivity_margin() const { return margin > 0.0 ? margin : cyl.default_margin(); }
};

enum class EntryKind { Coupled, Interior };

struct BasisEntry {
    EntryKind kind;
    int index;  // shell mode for coupled entries, interior mode otherwise
};

// Fluid basis fields tabulated on the quadrature of one deformed domain.
struct FluidSample {
    FluidDomain domain;
    FieldTable table;                       // values and local gradients
    std::array<Eigen::MatrixXd, 3> rate;    // Eulerian time derivatives of the values
    Eigen::VectorXd inlet, outlet;          // int over each end disk of X . n (outward n)
};

// Interleaved basis: coupled triples (extension of Y_j, Y_j, solid lift of Y_j)
// alternate with interior pairs (Piola image of a Stokes mode, 0, solid interior
// mode); whichever family is longer fills the tail.
class GlobalBasis {
public:
    explicit GlobalBasis(const Discretization& disc);

    const Discretization& discretization() const { return disc_; }
    const CylinderConfig& cylinder() const { return disc_.cyl; }
    int size() const { return static_cast<int>(entries_.size()); }
    const std::vector<BasisEntry>& entries() const { return entries_; }

    const std::shared_ptr<const ShellBasis>& shell() const { return shell_; }
    const std::shared_ptr<const SolidBasis>& solid() const { return solid_; }
    const StokesBasis& stokes() const { return *stokes_; }
    const std::shared_ptr<const SurfaceGrid>& grid() const { return grid_; }

    // shell coefficients = shell_map * a, solid coefficients = solid_map * a.
    const Eigen::MatrixXd& shell_map() const { return shell_map_; }
    const Eigen::MatrixXd& solid_map() const { return solid_map_; }

    // Constant blocks in global numbering.
    const Eigen::MatrixXd& structure_mass() const { return structure_mass_; }   // shell + solid inertia
    const Eigen::MatrixXd& shell_stiffness() const { return shell_stiffness_; }
    const Eigen::MatrixXd& solid_elastic() const { return solid_elastic_; }
    const Eigen::MatrixXd& solid_viscous() const { return solid_viscous_; }
    Eigen::MatrixXd stiffness() const { return shell_stiffness_ + solid_elastic_; }
    // Shell mode values on the surface grid, nodes x entries.
    const Eigen::MatrixXd& shell_values() const { return shell_values_; }

    ShellField shell_field(const Eigen::VectorXd& a) const;
    SolidField solid_field(const Eigen::VectorXd& a) const;

    // Throws DomainViolation unless delta (shell coefficients) is admissible.
    void require_admissible(const Eigen::VectorXd& delta) const;

    // Fluid fields on the domain of delta with d delta/dt = delta_rate.
    FluidSample tabulate(const Eigen::VectorXd& delta, const Eigen::VectorXd& delta_rate) const;

    // Fluid component of entry k at a point of the domain of delta.
    CylJet fluid_mode(int k, const ShellField& delta, double r, double theta, double z) const;
    // Fluid field sum_k c_k X_k^F on the domain of delta.
    VectorField fluid_field(const Eigen::VectorXd& c, const ShellField& delta) const;

private:
    Discretization disc_;
    std::vector<BasisEntry> entries_;
    std::shared_ptr<const ShellBasis> shell_;
    std::shared_ptr<const SolidBasis> solid_;
    std::shared_ptr<const StokesBasis> stokes_;
    std::shared_ptr<const SurfaceGrid> grid_;
    std::shared_ptr<const StokesAxialCache> stokes_cache_;
    std::vector<ColumnTables> columns_, inlet_columns_, outlet_columns_;
    std::shared_ptr<const FullIntegrals> full_;
    Eigen::MatrixXd shell_map_, solid_map_;
    Eigen::VectorXd interior_inlet_, interior_outlet_;
    Eigen::MatrixXd structure_mass_, shell_stiffness_, solid_elastic_, solid_viscous_, shell_values_;
};

// Matrices of the Galerkin system at one instant.
struct SystemSample {
    Eigen::MatrixXd mass;          // fluid + shell + solid inertia
    Eigen::MatrixXd transport;     // basis motion: N + Q / 2
    Eigen::MatrixXd convection;    // skew convection block
    Eigen::MatrixXd dissipation;   // fluid viscous + solid viscoelastic
    Eigen::VectorXd inlet, outlet; // load = p_in * inlet - p_out * outlet

    Eigen::MatrixXd damping() const { return transport + convection + dissipation; }
    Eigen::VectorXd load(double p_in, double p_out) const { return p_in * inlet - p_out * outlet; }
};

// Pieces of the transport block, kept apart for checks.
struct TransportParts {
    Eigen::MatrixXd basis_motion;   // N_kj = int X_k . dX_j/dt
    Eigen::MatrixXd boundary;       // Q_kj = int_omega X_k X_j d delta/dt (R + delta)
};

TransportParts transport_parts(const GlobalBasis& basis, const FluidSample& sample, const Eigen::VectorXd& delta,
                               const Eigen::VectorXd& delta_rate);

// One sample: geometry delta with rate, convecting field given by global
// coefficients (empty = no convection).
SystemSample assemble_sample(const GlobalBasis& basis, const Eigen::VectorXd& delta, const Eigen::VectorXd& delta_rate,
                             const Eigen::VectorXd& transport_field);
SystemSample assemble_sample(const GlobalBasis& basis, const FluidSample& fluid, const Eigen::VectorXd& delta,
                             const Eigen::VectorXd& delta_rate, const Eigen::VectorXd& transport_field);

// Time-sampled Galerkin system over one period: t_m = m * period / steps,
// samples[m] for m = 0..steps.
struct AssembledSystem {
    double period = 1.0;
    int steps = 1;
    Eigen::MatrixXd stiffness;
    std::vector<SystemSample> samples;
    BoundaryForcing forcing;

    int size() const { return static_cast<int>(stiffness.rows()); }
    double dt() const { return period / steps; }
    double time(int m) const { return period * m / steps; }
};

// Geometry and convecting field along one period (steps samples, periodic).
// Empty vectors mean zero.
struct CouplingPath {
    std::vector<Eigen::VectorXd> delta, delta_rate, transport;
};

AssembledSystem assemble(const GlobalBasis& basis, const CouplingPath& path, const BoundaryForcing& forcing,
                         int steps);

// One oscillator m x'' + c x' + k x = p_in(t), sampled like a full system.
AssembledSystem single_mode_system(double mass, double damping, double stiffness, const BoundaryForcing& forcing,
                                   int steps);

// Period T = steps * dt with dt = 2 tan(pi / steps) / omega, omega^2 = k / m: the
// undamped midpoint map then turns the oscillator by exactly one revolution.
double resonant_period(double mass, double stiffness, int steps);

struct Reconstruction {
    VectorField fluid;
    ShellField eta, eta_rate;
    SolidField solid, solid_rate;
};

// Fields of the ansatz u = sum a_dot X^F, eta = sum a X, d = sum a X^S on the
// domain of delta.
Reconstruction reconstruct(const GlobalBasis& basis, const Eigen::VectorXd& a, const Eigen::VectorXd& a_dot,
                           const ShellField& delta);

}  // namespace perifsi
