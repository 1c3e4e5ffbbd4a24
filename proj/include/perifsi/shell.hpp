#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "perifsi/beam.hpp"
#include "perifsi/quadrature.hpp"

namespace perifsi {

enum class BoundaryMode { ClampedAll, PeriodicTheta };

// Value, gradient and Hessian of a scalar on the shell parameter domain
// (theta, z).
struct ShellJet {
    double value = 0.0;
    double d_theta = 0.0, d_z = 0.0;
    double d_tt = 0.0, d_tz = 0.0, d_zz = 0.0;

    ShellJet& operator+=(const ShellJet& o);
    ShellJet operator*(double s) const;
};

// Tensor basis Y_k(theta, z) = Theta_a(theta) Z_b(z), k = a * n_z + b.
class ShellBasis {
public:
    ShellBasis(BoundaryMode mode, int n_theta, int n_z, double length);

    BoundaryMode mode() const { return mode_; }
    int n_theta() const { return theta_.size(); }
    int n_z() const { return z_.size(); }
    int size() const { return n_theta() * n_z(); }
    double length() const { return z_.length(); }
    int theta_index(int k) const { return k / n_z(); }
    int z_index(int k) const { return k % n_z(); }

    const ModeFamily1D& theta_family() const { return theta_; }
    const ModeFamily1D& z_family() const { return z_; }

    ShellJet mode(int k, double theta, double z) const;
    ShellJet evaluate(const Eigen::VectorXd& coefficients, double theta, double z) const;

    // Quadrature rules in theta and z sized for products of a few basis functions.
    QuadratureRule theta_rule(int oversample = 1) const;
    QuadratureRule z_rule(int oversample = 1) const;

    bool operator==(const ShellBasis& o) const {
        return mode_ == o.mode_ && n_theta() == o.n_theta() && n_z() == o.n_z() &&
               length() == o.length();
    }

private:
    BoundaryMode mode_;
    ModeFamily1D theta_, z_;
};

// Shell displacement (or geometry / test) field: coefficients on a shared basis.
class ShellField {
public:
    ShellField() = default;
    explicit ShellField(std::shared_ptr<const ShellBasis> basis);
    ShellField(std::shared_ptr<const ShellBasis> basis, Eigen::VectorXd coefficients);

    static ShellField zero(std::shared_ptr<const ShellBasis> basis) { return ShellField(std::move(basis)); }
    static ShellField unit(std::shared_ptr<const ShellBasis> basis, int k);

    const ShellBasis& basis() const { return *basis_; }
    const std::shared_ptr<const ShellBasis>& basis_ptr() const { return basis_; }
    const Eigen::VectorXd& coefficients() const { return coefficients_; }
    Eigen::VectorXd& coefficients() { return coefficients_; }
    std::pair<int, int> basis_dims() const { return {basis_->n_theta(), basis_->n_z()}; }

    ShellJet operator()(double theta, double z) const { return basis_->evaluate(coefficients_, theta, z); }
    bool is_zero() const { return coefficients_.isZero(0.0); }

    ShellField operator+(const ShellField& o) const;
    ShellField operator-(const ShellField& o) const;
    ShellField operator*(double s) const;

private:
    std::shared_ptr<const ShellBasis> basis_;
    Eigen::VectorXd coefficients_;
};

// Throws BasisMismatch unless both fields live on equal bases.
void require_same_basis(const ShellField& a, const ShellField& b);

// Tensor quadrature grid on omega with per-node weights dtheta dz and
// tabulated 1D factors, used for fast whole-grid evaluation.
class SurfaceGrid {
public:
    SurfaceGrid(std::shared_ptr<const ShellBasis> basis, QuadratureRule theta, QuadratureRule z);
    static SurfaceGrid standard(std::shared_ptr<const ShellBasis> basis, int oversample = 1);

    const ShellBasis& basis() const { return *basis_; }
    const QuadratureRule& theta() const { return theta_; }
    const QuadratureRule& z() const { return z_; }
    int n_theta() const { return static_cast<int>(theta_.size()); }
    int n_z() const { return static_cast<int>(z_.size()); }
    int size() const { return n_theta() * n_z(); }
    // Node index = i_theta * n_z + i_z.
    double weight(int node) const { return theta_.weights[node / n_z()] * z_.weights[node % n_z()]; }

    const Jet1D& theta_factor(int a, int i_theta) const { return theta_tab_[a * n_theta() + i_theta]; }
    const Jet1D& z_factor(int b, int i_z) const { return z_tab_[b * n_z() + i_z]; }

    ShellJet mode(int k, int node) const;
    std::vector<ShellJet> evaluate(const Eigen::VectorXd& coefficients) const;

private:
    std::shared_ptr<const ShellBasis> basis_;
    QuadratureRule theta_, z_;
    std::vector<Jet1D> theta_tab_, z_tab_;
};

// K(eta, xi) = integral over omega of Hess(eta) : Hess(xi) dtheta dz.
double biharmonic_form(const ShellField& eta, const ShellField& xi);

// Matrix of the biharmonic form on the basis, assembled from 1D factors.
Eigen::MatrixXd shell_stiffness_matrix(const ShellBasis& basis);
// Gram matrix integral Y_j Y_k.
Eigen::MatrixXd shell_gram_matrix(const ShellBasis& basis);

}  // namespace perifsi
