#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "perifsi/cyl_field.hpp"
#include "perifsi/geometry.hpp"

namespace perifsi {

struct StokesResolution {
    int radial = 6;   // polynomial degrees in s = r^2 / R^2 per family
    int axial = 16;   // axial harmonics j = 1..axial
};

// Axisymmetric divergence-free fields on the reference cylinder with zero trace
// on the lateral wall and zero tangential trace on the end disks, built from
// three candidate families (through-flow, meridional stream function, swirl),
// and the lowest eigenmodes of the Dirichlet form among them.
class StokesBasis {
public:
    // Quantities tabulated per candidate: values (r, theta, z) then partials
    // d/dr and d/dz of each component.
    static constexpr int kQuantities = 9;

    StokesBasis(const CylinderConfig& cyl, StokesResolution res, int n_modes);

    const CylinderConfig& cylinder() const { return cyl_; }
    StokesResolution resolution() const { return res_; }
    int size() const { return static_cast<int>(coef_.cols()); }
    int candidate_count() const { return res_.radial * (1 + 2 * res_.axial); }

    const Eigen::VectorXd& eigenvalues() const { return eig_; }
    const Eigen::MatrixXd& coefficients() const { return coef_; }

    // Fills out[q * candidate_count() + c] for quantity q, candidate c.
    void candidates(double r, double z, double* out) const;
    CylJet candidate(int c, double r, double theta, double z) const;
    CylJet mode(int k, double r, double theta, double z) const;
    VectorField mode_field(int k) const;

private:
    CylinderConfig cyl_;
    StokesResolution res_;
    Eigen::MatrixXd coef_;
    Eigen::VectorXd eig_;
};

StokesBasis build_stokes_basis(const CylinderConfig& cyl, StokesResolution res, int n_modes);

}  // namespace perifsi

namespace perifsi {

// Stokes modes restricted to fixed axial positions. At each stored z every
// tabulated quantity is r^e times a polynomial in s = r^2 / R^2 (e = 0 or 1 by
// parity), held in Chebyshev form so a node costs one short recurrence.
class StokesAxialCache {
public:
    StokesAxialCache(const StokesBasis& basis, std::vector<double> z_nodes);

    int modes() const { return modes_; }
    const std::vector<double>& z_nodes() const { return z_; }
    // out(q, k) for quantity q (StokesBasis layout) of mode k at (r, z_nodes[iz]).
    void evaluate(int iz, double r, Eigen::MatrixXd& out) const;
    // Same, repacked as a jet per mode.
    CylJet mode(int iz, int k, double r) const;

private:
    double R_;
    int modes_ = 0, degree_ = 0;
    std::vector<double> z_;
    std::vector<Eigen::MatrixXd> coef_;  // per z: (q * modes + k) x degree
};

}  // namespace perifsi
