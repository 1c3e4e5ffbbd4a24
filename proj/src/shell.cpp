#include "perifsi/shell.hpp"

#include <numbers>

#include "perifsi/errors.hpp"

namespace perifsi {

ShellJet& ShellJet::operator+=(const ShellJet& o) {
    value += o.value;
    d_theta += o.d_theta;
    d_z += o.d_z;
    d_tt += o.d_tt;
    d_tz += o.d_tz;
    d_zz += o.d_zz;
    return *this;
}

ShellJet ShellJet::operator*(double s) const {
    return {value * s, d_theta * s, d_z * s, d_tt * s, d_tz * s, d_zz * s};
}

namespace {

ShellJet tensor(const Jet1D& t, const Jet1D& z) {
    return {t[0] * z[0], t[1] * z[0], t[0] * z[1], t[2] * z[0], t[1] * z[1], t[0] * z[2]};
}

}  // namespace

ShellBasis::ShellBasis(BoundaryMode mode, int n_theta, int n_z, double length)
    : mode_(mode),
      theta_(mode == BoundaryMode::PeriodicTheta
                 ? ModeFamily1D::fourier(n_theta)
                 : ModeFamily1D::clamped_beam(2.0 * std::numbers::pi, n_theta)),
      z_(ModeFamily1D::clamped_beam(length, n_z)) {}

ShellJet ShellBasis::mode(int k, double theta, double z) const {
    if (k < 0 || k >= size()) throw IndexOutOfRange("shell mode " + std::to_string(k));
    return tensor(theta_.eval(theta_index(k), theta), z_.eval(z_index(k), z));
}

ShellJet ShellBasis::evaluate(const Eigen::VectorXd& c, double theta, double z) const {
    if (c.size() != size()) throw BasisMismatch("shell coefficient length");
    std::vector<Jet1D> tz(n_z());
    for (int b = 0; b < n_z(); ++b) tz[b] = z_.eval(b, z);
    ShellJet out;
    for (int a = 0; a < n_theta(); ++a) {
        const Jet1D ta = theta_.eval(a, theta);
        for (int b = 0; b < n_z(); ++b) {
            const double ck = c[a * n_z() + b];
            if (ck != 0.0) out += tensor(ta, tz[b]) * ck;
        }
    }
    return out;
}

QuadratureRule ShellBasis::theta_rule(int oversample) const {
    if (mode_ == BoundaryMode::PeriodicTheta) {
        if (n_theta() == 1) return periodic_trapezoid(1, 2.0 * std::numbers::pi);
        const int m = n_theta() / 2;
        return periodic_trapezoid(oversample * (8 * m + 8), 2.0 * std::numbers::pi);
    }
    return gauss_legendre(oversample * (3 * n_theta() + 16), 0.0, 2.0 * std::numbers::pi);
}

QuadratureRule ShellBasis::z_rule(int oversample) const {
    return gauss_legendre(oversample * (3 * n_z() + 16), 0.0, length());
}

ShellField::ShellField(std::shared_ptr<const ShellBasis> basis)
    : basis_(std::move(basis)), coefficients_(Eigen::VectorXd::Zero(basis_->size())) {}

ShellField::ShellField(std::shared_ptr<const ShellBasis> basis, Eigen::VectorXd coefficients)
    : basis_(std::move(basis)), coefficients_(std::move(coefficients)) {
    if (coefficients_.size() != basis_->size()) throw BasisMismatch("shell coefficient length");
}

ShellField ShellField::unit(std::shared_ptr<const ShellBasis> basis, int k) {
    ShellField f(std::move(basis));
    if (k < 0 || k >= f.coefficients_.size()) throw IndexOutOfRange("shell mode " + std::to_string(k));
    f.coefficients_[k] = 1.0;
    return f;
}

ShellField ShellField::operator+(const ShellField& o) const {
    require_same_basis(*this, o);
    return ShellField(basis_, coefficients_ + o.coefficients_);
}

ShellField ShellField::operator-(const ShellField& o) const {
    require_same_basis(*this, o);
    return ShellField(basis_, coefficients_ - o.coefficients_);
}

ShellField ShellField::operator*(double s) const { return ShellField(basis_, coefficients_ * s); }

void require_same_basis(const ShellField& a, const ShellField& b) {
    if (!a.basis_ptr() || !b.basis_ptr() || !(a.basis() == b.basis()))
        throw BasisMismatch("shell fields live on different bases");
}

SurfaceGrid::SurfaceGrid(std::shared_ptr<const ShellBasis> basis, QuadratureRule theta, QuadratureRule z)
    : basis_(std::move(basis)), theta_(std::move(theta)), z_(std::move(z)) {
    const auto& tf = basis_->theta_family();
    const auto& zf = basis_->z_family();
    theta_tab_.resize(tf.size() * theta_.size());
    z_tab_.resize(zf.size() * z_.size());
    for (int a = 0; a < tf.size(); ++a)
        for (int i = 0; i < n_theta(); ++i) theta_tab_[a * n_theta() + i] = tf.eval(a, theta_.nodes[i]);
    for (int b = 0; b < zf.size(); ++b)
        for (int i = 0; i < n_z(); ++i) z_tab_[b * n_z() + i] = zf.eval(b, z_.nodes[i]);
}

SurfaceGrid SurfaceGrid::standard(std::shared_ptr<const ShellBasis> basis, int oversample) {
    auto t = basis->theta_rule(oversample);
    auto z = basis->z_rule(oversample);
    return SurfaceGrid(std::move(basis), std::move(t), std::move(z));
}

ShellJet SurfaceGrid::mode(int k, int node) const {
    return tensor(theta_factor(basis_->theta_index(k), node / n_z()),
                  z_factor(basis_->z_index(k), node % n_z()));
}

std::vector<ShellJet> SurfaceGrid::evaluate(const Eigen::VectorXd& c) const {
    if (c.size() != basis_->size()) throw BasisMismatch("shell coefficient length");
    std::vector<ShellJet> out(size());
    for (int k = 0; k < basis_->size(); ++k) {
        if (c[k] == 0.0) continue;
        for (int node = 0; node < size(); ++node) out[node] += mode(k, node) * c[k];
    }
    return out;
}

double biharmonic_form(const ShellField& eta, const ShellField& xi) {
    require_same_basis(eta, xi);
    const auto& basis = eta.basis();
    const auto tr = basis.theta_rule(2);
    const auto zr = basis.z_rule(2);
    double sum = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i)
        for (std::size_t j = 0; j < zr.size(); ++j) {
            const ShellJet a = eta(tr.nodes[i], zr.nodes[j]);
            const ShellJet b = xi(tr.nodes[i], zr.nodes[j]);
            sum += tr.weights[i] * zr.weights[j] *
                   (a.d_tt * b.d_tt + 2.0 * a.d_tz * b.d_tz + a.d_zz * b.d_zz);
        }
    return sum;
}

namespace {

// integral f_a^(p) f_c^(q) over the family's interval.
Eigen::MatrixXd moments(const ModeFamily1D& family, const QuadratureRule& rule, int p, int q) {
    const int n = family.size();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        Eigen::VectorXd fp(n), fq(n);
        for (int a = 0; a < n; ++a) {
            const Jet1D j = family.eval(a, rule.nodes[i]);
            fp[a] = j[p];
            fq[a] = j[q];
        }
        out.noalias() += rule.weights[i] * fp * fq.transpose();
    }
    return out;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace

Eigen::MatrixXd shell_stiffness_matrix(const ShellBasis& basis) {
    const auto tr = basis.theta_rule(2);
    const auto zr = basis.z_rule(2);
    const auto& tf = basis.theta_family();
    const auto& zf = basis.z_family();
    Eigen::MatrixXd k = kron(moments(tf, tr, 2, 2), moments(zf, zr, 0, 0)) +
                        2.0 * kron(moments(tf, tr, 1, 1), moments(zf, zr, 1, 1)) +
                        kron(moments(tf, tr, 0, 0), moments(zf, zr, 2, 2));
    return 0.5 * (k + k.transpose());
}

Eigen::MatrixXd shell_gram_matrix(const ShellBasis& basis) {
    const auto tr = basis.theta_rule(2);
    const auto zr = basis.z_rule(2);
    Eigen::MatrixXd g = kron(moments(basis.theta_family(), tr, 0, 0), moments(basis.z_family(), zr, 0, 0));
    return 0.5 * (g + g.transpose());
}

}  // namespace perifsi
