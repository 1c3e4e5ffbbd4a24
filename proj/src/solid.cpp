#include "perifsi/solid.hpp"

#include <algorithm>

#include "perifsi/errors.hpp"

namespace perifsi {

void SolidParams::validate() const {
    if (!(lambda1 > 0.0)) throw ValidationError("lambda1 > 0");
    if (!(lambda2 >= 0.0)) throw ValidationError("lambda2 >= 0");
    if (!(delta_visc >= 0.0)) throw ValidationError("delta_visc >= 0");
    if (!(rho_s2 > 0.0)) throw ValidationError("rho_s2 > 0");
}

std::array<double, 2> solid_cutoff(double x) {
    return {1.0 - 3.0 * x * x + 2.0 * x * x * x, -6.0 * x + 6.0 * x * x};
}

SolidBasis::SolidBasis(const CylinderConfig& cyl, const SolidParams& params,
                       std::shared_ptr<const ShellBasis> shell, int n_radial, int n_interior)
    : cyl_(cyl), params_(params), shell_(std::move(shell)), n_radial_(n_radial) {
    cyl_.validate();
    params_.validate();
    if (n_radial < 1) throw ValidationError("N_r_solid >= 1");
    if (n_interior < 0 || n_interior > candidate_count())
        throw ValidationError("n_interior <= solid candidate count");

    const auto rr = gauss_legendre(n_radial + 6, cyl_.R, cyl_.R + cyl_.H);
    const auto tr = shell_->theta_rule();
    const auto zr = shell_->z_rule();
    for (std::size_t i = 0; i < tr.size(); ++i)
        for (std::size_t j = 0; j < zr.size(); ++j)
            for (std::size_t k = 0; k < rr.size(); ++k)
                nodes_.push(rr.nodes[k], tr.nodes[i], zr.nodes[j],
                            rr.nodes[k] * rr.weights[k] * tr.weights[i] * zr.weights[j]);
    const Eigen::Index n_nodes = static_cast<Eigen::Index>(nodes_.size());
    const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(nodes_.weight.data(), n_nodes);

    // Interior modes from the candidate space.
    const int nc = candidate_count();
    FieldTable cand(n_nodes, nc);
    for (Eigen::Index q = 0; q < n_nodes; ++q)
        for (int c = 0; c < nc; ++c)
            cand.set(q, c, candidate(c, nodes_.r[q], nodes_.theta[q], nodes_.z[q]), nodes_.r[q]);
    auto elastic_of = [&](const FieldTable& t) {
        const std::array<Eigen::MatrixXd, 1> div{t.grad[0] + t.grad[4] + t.grad[8]};
        return Eigen::MatrixXd(params_.lambda1 * weighted_gram(t.grad, t.grad, w) +
                               params_.lambda2 * weighted_gram(div, div, w));
    };
    if (n_interior > 0) {
        Eigen::MatrixXd a = elastic_of(cand);
        Eigen::MatrixXd m = params_.rho_s2 * weighted_gram(cand.value, cand.value, w);
        a = 0.5 * (a + a.transpose());
        m = 0.5 * (m + m.transpose());
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, m);
        if (es.info() != Eigen::Success) throw EigenFailure("solid interior eigenproblem");
        interior_eig_ = es.eigenvalues().head(n_interior);
        interior_coef_ = es.eigenvectors().leftCols(n_interior);
        for (int j = 0; j < n_interior; ++j) {
            auto col = interior_coef_.col(j);
            const double big = col.cwiseAbs().maxCoeff();
            for (Eigen::Index c = 0; c < col.size(); ++c)
                if (std::abs(col[c]) > 1e-8 * big) {
                    if (col[c] < 0) col *= -1.0;
                    break;
                }
        }
    } else {
        interior_coef_.resize(nc, 0);
    }

    table_ = FieldTable(n_nodes, size());
    for (Eigen::Index q = 0; q < n_nodes; ++q)
        for (int k = 0; k < n_lifted(); ++k)
            table_.set(q, k, lifted(k, nodes_.r[q], nodes_.theta[q], nodes_.z[q]), nodes_.r[q]);
    for (int c = 0; c < 3; ++c) table_.value[c].rightCols(n_interior) = cand.value[c] * interior_coef_;
    for (int c = 0; c < 9; ++c) table_.grad[c].rightCols(n_interior) = cand.grad[c] * interior_coef_;

    mass_ = params_.rho_s2 * weighted_gram(table_.value, table_.value, w);
    elastic_ = elastic_of(table_);
    viscous_ = params_.lambda1 * params_.delta_visc * weighted_gram(table_.grad, table_.grad, w);
    for (auto* m : {&mass_, &elastic_, &viscous_}) *m = 0.5 * (*m + m->transpose());
}

int SolidBasis::candidate_count() const { return 3 * n_radial_ * shell_->n_theta() * shell_->n_z(); }

CylJet SolidBasis::candidate(int c, double r, double theta, double z) const {
    // c = ((i * n_theta + a) * n_z + b) * 3 + comp
    const int comp = c % 3;
    const int rest = c / 3;
    const int b = rest % shell_->n_z();
    const int a = (rest / shell_->n_z()) % shell_->n_theta();
    const int i = rest / (shell_->n_z() * shell_->n_theta());
    const double x = (r - cyl_.R) / cyl_.H;
    const auto p = legendre_jet(i, 2.0 * x - 1.0);
    const double chi = x * p[0];
    const double dchi = (p[0] + 2.0 * x * p[1]) / cyl_.H;
    const Jet1D t = shell_->theta_family().eval(a, theta);
    const Jet1D zz = shell_->z_family().eval(b, z);
    CylJet out;
    out.value[comp] = chi * t[0] * zz[0];
    out.partial(comp, 0) = dchi * t[0] * zz[0];
    out.partial(comp, 1) = chi * t[1] * zz[0];
    out.partial(comp, 2) = chi * t[0] * zz[1];
    return out;
}

CylJet SolidBasis::lifted(int j, double r, double theta, double z) const {
    const ShellJet y = shell_->mode(j, theta, z);
    const auto s = solid_cutoff((r - cyl_.R) / cyl_.H);
    CylJet out;
    out.value[0] = s[0] * y.value;
    out.partial(0, 0) = s[1] / cyl_.H * y.value;
    out.partial(0, 1) = s[0] * y.d_theta;
    out.partial(0, 2) = s[0] * y.d_z;
    return out;
}

CylJet SolidBasis::interior(int j, double r, double theta, double z) const {
    if (j < 0 || j >= n_interior()) throw IndexOutOfRange("solid interior mode " + std::to_string(j));
    CylJet out;
    for (int c = 0; c < interior_coef_.rows(); ++c) {
        const double w = interior_coef_(c, j);
        if (w != 0.0) out += candidate(c, r, theta, z) * w;
    }
    return out;
}

CylJet SolidBasis::mode(int k, double r, double theta, double z) const {
    if (k < 0 || k >= size()) throw IndexOutOfRange("solid mode " + std::to_string(k));
    return k < n_lifted() ? lifted(k, r, theta, z) : interior(k - n_lifted(), r, theta, z);
}

SolidField::SolidField(std::shared_ptr<const SolidBasis> basis, Eigen::VectorXd coefficients)
    : basis_(std::move(basis)), coefficients_(std::move(coefficients)) {
    if (coefficients_.size() != basis_->size()) throw BasisMismatch("solid coefficient length");
}

SolidField SolidField::zero(std::shared_ptr<const SolidBasis> basis) {
    const int n = basis->size();
    return SolidField(std::move(basis), Eigen::VectorXd::Zero(n));
}

CylJet SolidBasis::evaluate(const Eigen::VectorXd& c, double r, double theta, double z) const {
    if (c.size() != size()) throw BasisMismatch("solid coefficient length");
    CylJet out;
    for (int k = 0; k < n_lifted(); ++k)
        if (c[k] != 0.0) out += lifted(k, r, theta, z) * c[k];
    const Eigen::VectorXd weights = interior_coef_ * c.tail(n_interior());
    for (int j = 0; j < weights.size(); ++j)
        if (weights[j] != 0.0) out += candidate(j, r, theta, z) * weights[j];
    return out;
}

CylJet SolidField::operator()(double r, double theta, double z) const {
    return basis_->evaluate(coefficients_, r, theta, z);
}

SolidField solid_lift(std::shared_ptr<const SolidBasis> basis, const ShellField& xi) {
    if (!(xi.basis() == basis->shell())) throw BasisMismatch("solid_lift: shell basis differs");
    Eigen::VectorXd c = Eigen::VectorXd::Zero(basis->size());
    c.head(basis->n_lifted()) = xi.coefficients();
    return SolidField(std::move(basis), std::move(c));
}

double lame_form(const SolidField& d, const SolidField& d_dot, const SolidField& zeta) {
    if (d.basis_ptr() != zeta.basis_ptr() || d_dot.basis_ptr() != zeta.basis_ptr())
        throw BasisMismatch("lame_form: fields on different solid bases");
    const auto& b = zeta.basis();
    const auto& nodes = b.nodes();
    const auto& p = b.params();
    double sum = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        const double r = nodes.r[q];
        const Eigen::Matrix3d gd = local_gradient(d(r, nodes.theta[q], nodes.z[q]), r);
        const Eigen::Matrix3d gv = local_gradient(d_dot(r, nodes.theta[q], nodes.z[q]), r);
        const Eigen::Matrix3d gz = local_gradient(zeta(r, nodes.theta[q], nodes.z[q]), r);
        sum += nodes.weight[q] * (p.lambda1 * (gd.cwiseProduct(gz).sum() + p.delta_visc * gv.cwiseProduct(gz).sum()) +
                                  p.lambda2 * gd.trace() * gz.trace());
    }
    return sum;
}

}  // namespace perifsi
