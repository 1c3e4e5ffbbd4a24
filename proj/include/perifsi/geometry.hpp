#pragma once

#include <Eigen/Dense>

#include "perifsi/shell.hpp"

namespace perifsi {

struct CylinderConfig {
    double R = 1.0;  // reference radius
    double L = 4.0;  // length
    double H = 0.5;  // solid thickness

    // Throws ValidationError naming the first violated invariant.
    void validate() const;
    double default_margin() const { return 0.05 * R; }
    bool operator==(const CylinderConfig&) const = default;
};

struct AleJet {
    Eigen::Vector3d value;
    Eigen::Matrix3d gradient;
    double det = 1.0;
};

// Cylindrical angle of (x, y) in [0, 2pi).
double polar_angle(double x, double y);

// psi(x, y, z) = ((R + delta)/R x, (R + delta)/R y, z) with delta evaluated at the
// cylindrical angles of p.
AleJet ale_map(const CylinderConfig& cyl, const ShellField& delta, const Eigen::Vector3d& p,
               double margin);
AleJet ale_map(const CylinderConfig& cyl, const ShellField& delta, const Eigen::Vector3d& p);

double interface_jacobian(const CylinderConfig& cyl, const ShellField& eta, double theta, double z);

// Min and max of eta over a tensor grid with 4x oversampling per direction.
std::pair<double, double> sampled_range(const ShellField& eta);
// Max of |eta| over a tensor grid with 4x oversampling per direction.
double sampled_sup_norm(const ShellField& eta);
bool check_injectivity(const CylinderConfig& cyl, const ShellField& eta, double margin);

}  // namespace perifsi
