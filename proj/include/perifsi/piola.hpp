#pragma once

#include <Eigen/Dense>

#include "perifsi/cyl_field.hpp"
#include "perifsi/geometry.hpp"
#include "perifsi/shell.hpp"

namespace perifsi {

// Pushed-forward field at a physical point, with its Eulerian time derivative.
struct PiolaJet {
    CylJet field;
    Eigen::Vector3d rate = Eigen::Vector3d::Zero();
};

// Reference radius of the physical radius r under the radial scaling.
inline double reference_radius(double R, const ShellJet& delta, double r) { return r / (1.0 + delta.value / R); }

// Piola pushforward of a reference sample `ref` (taken at reference_radius) to
// the physical point r. `delta_rate` supplies d delta/dt and its gradient for
// the time derivative at fixed physical position.
PiolaJet piola_apply(double R, const ShellJet& delta, const ShellJet& delta_rate, const CylJet& ref, double r);

// Pushforward of a reference-cylinder field through the ALE map of eta.
VectorField piola(const CylinderConfig& cyl, const ShellField& eta, VectorField reference, double margin);
VectorField piola(const CylinderConfig& cyl, const ShellField& eta, VectorField reference);

}  // namespace perifsi
