#pragma once

#include <memory>
#include <vector>

#include "perifsi/cyl_field.hpp"
#include "perifsi/geometry.hpp"
#include "perifsi/shell.hpp"

namespace perifsi {

struct FluidQuadratureSpec {
    int per_panel = 8;       // Gauss points per radial panel
    int oversample = 1;      // applied to the shell theta / z rules
};

// Quadrature of the deformed fluid domain {r < R + delta(theta, z)} at one
// instant: per surface-grid column, Gauss panels [0, R/4], [R/4, R/2],
// [R/2, R + delta]. Also carries the end disks and the interface nodes.
class FluidDomain {
public:
    FluidDomain(const CylinderConfig& cyl, const ShellField& delta, FluidQuadratureSpec spec = {});
    // Reuses an existing surface grid and precomputed delta values on it.
    FluidDomain(const CylinderConfig& cyl, std::shared_ptr<const SurfaceGrid> grid, std::vector<ShellJet> delta,
                FluidQuadratureSpec spec);

    const CylinderConfig& cylinder() const { return cyl_; }
    const SurfaceGrid& grid() const { return *grid_; }
    const std::shared_ptr<const SurfaceGrid>& grid_ptr() const { return grid_; }
    const std::vector<ShellJet>& delta() const { return delta_; }   // per surface node
    const NodeSet& nodes() const { return nodes_; }
    const std::vector<int>& column() const { return column_; }      // surface node of each volume node
    const NodeSet& inlet() const { return inlet_; }                 // z = 0, weight r dr dtheta
    const NodeSet& outlet() const { return outlet_; }               // z = L
    int per_panel() const { return spec_.per_panel; }

private:
    void build();

    CylinderConfig cyl_;
    std::shared_ptr<const SurfaceGrid> grid_;
    std::vector<ShellJet> delta_;
    FluidQuadratureSpec spec_;
    NodeSet nodes_, inlet_, outlet_;
    std::vector<int> column_;
};

// b(u, v, w) = 1/2 int (grad v) u . w - 1/2 int (grad w) u . v over the domain.
double trilinear_b(const FluidDomain& domain, const VectorField& u, const VectorField& v, const VectorField& w);

// P_in int_{inlet} q.n - P_out int_{outlet} q.n with outward normals -e_z, +e_z.
double boundary_load(const FluidDomain& domain, const VectorField& q, double p_in, double p_out);

// int grad u : grad q, and 2 int D(u) : D(q).
double dirichlet_form(const FluidDomain& domain, const VectorField& u, const VectorField& q);
double symmetric_gradient_form(const FluidDomain& domain, const VectorField& u, const VectorField& q);

}  // namespace perifsi
