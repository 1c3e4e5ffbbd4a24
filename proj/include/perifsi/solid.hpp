#pragma once

#include <Eigen/Dense>
#include <memory>

#include "perifsi/cyl_field.hpp"
#include "perifsi/geometry.hpp"
#include "perifsi/shell.hpp"

namespace perifsi {

struct SolidParams {
    double lambda1 = 1.0;     // shear-type Lame constant
    double lambda2 = 1.0;     // dilatational Lame constant
    double delta_visc = 1.0;  // viscoelastic time constant
    double rho_s2 = 1.0;      // solid density

    void validate() const;
    bool operator==(const SolidParams&) const = default;
};

// Cubic Hermite cutoff on [0, 1]: s(0) = 1, s(1) = 0, zero end slopes.
// Returns {s, ds/dx}.
std::array<double, 2> solid_cutoff(double x);

// Lifted modes s(r) Y_j e_r (one per shell mode) followed by interior modes
// vanishing at r = R and at both ends in z. Interior modes are the lowest
// eigenmodes of the elastic form against the solid mass.
class SolidBasis {
public:
    SolidBasis(const CylinderConfig& cyl, const SolidParams& params, std::shared_ptr<const ShellBasis> shell,
               int n_radial, int n_interior);

    const CylinderConfig& cylinder() const { return cyl_; }
    const SolidParams& params() const { return params_; }
    const ShellBasis& shell() const { return *shell_; }
    const std::shared_ptr<const ShellBasis>& shell_ptr() const { return shell_; }
    int n_lifted() const { return shell_->size(); }
    int n_interior() const { return static_cast<int>(interior_coef_.cols()); }
    int n_radial() const { return n_radial_; }
    int size() const { return n_lifted() + n_interior(); }

    CylJet lifted(int j, double r, double theta, double z) const;
    CylJet interior(int j, double r, double theta, double z) const;
    CylJet mode(int k, double r, double theta, double z) const;
    CylJet evaluate(const Eigen::VectorXd& coefficients, double r, double theta, double z) const;

    const Eigen::VectorXd& interior_eigenvalues() const { return interior_eig_; }
    const NodeSet& nodes() const { return nodes_; }
    const FieldTable& table() const { return table_; }

    // rho_s2 * integral X.Y
    const Eigen::MatrixXd& mass_matrix() const { return mass_; }
    // lambda1 * integral grad:grad + lambda2 * integral div div
    const Eigen::MatrixXd& elastic_matrix() const { return elastic_; }
    // lambda1 * delta_visc * integral grad:grad
    const Eigen::MatrixXd& viscous_matrix() const { return viscous_; }

    bool operator==(const SolidBasis& o) const { return this == &o; }

private:
    int candidate_count() const;
    CylJet candidate(int c, double r, double theta, double z) const;

    CylinderConfig cyl_;
    SolidParams params_;
    std::shared_ptr<const ShellBasis> shell_;
    int n_radial_;
    Eigen::MatrixXd interior_coef_;  // candidates x interior modes
    Eigen::VectorXd interior_eig_;
    NodeSet nodes_;
    FieldTable table_;
    Eigen::MatrixXd mass_, elastic_, viscous_;
};

// Solid displacement: coefficients over SolidBasis (lifted block first).
class SolidField {
public:
    SolidField(std::shared_ptr<const SolidBasis> basis, Eigen::VectorXd coefficients);
    static SolidField zero(std::shared_ptr<const SolidBasis> basis);

    const SolidBasis& basis() const { return *basis_; }
    const std::shared_ptr<const SolidBasis>& basis_ptr() const { return basis_; }
    const Eigen::VectorXd& coefficients() const { return coefficients_; }
    CylJet operator()(double r, double theta, double z) const;

private:
    std::shared_ptr<const SolidBasis> basis_;
    Eigen::VectorXd coefficients_;
};

// F_S(xi) = s(r) xi(theta, z) e_r.
SolidField solid_lift(std::shared_ptr<const SolidBasis> basis, const ShellField& xi);

// lambda1 int grad d : grad zeta + lambda1 delta_visc int grad d_dot : grad zeta
// + lambda2 int div d div zeta over the solid layer.
double lame_form(const SolidField& d, const SolidField& d_dot, const SolidField& zeta);

}  // namespace perifsi
