#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <vector>

namespace perifsi {

// Vector field sample in cylindrical components (r, theta, z) with its
// coordinate partials: partial(i, j) = d(component i)/d(coordinate j).
struct CylJet {
    Eigen::Vector3d value = Eigen::Vector3d::Zero();
    Eigen::Matrix3d partial = Eigen::Matrix3d::Zero();

    CylJet& operator+=(const CylJet& o) {
        value += o.value;
        partial += o.partial;
        return *this;
    }
    CylJet operator*(double s) const { return {value * s, partial * s}; }
    CylJet operator+(const CylJet& o) const { return {value + o.value, partial + o.partial}; }
    CylJet operator-(const CylJet& o) const { return {value - o.value, partial - o.partial}; }
};

// Gradient in the local orthonormal frame (e_r, e_theta, e_z):
// G(i, j) = component i of the derivative along direction j.
inline Eigen::Matrix3d local_gradient(const CylJet& f, double r) {
    const auto& v = f.value;
    const auto& p = f.partial;
    Eigen::Matrix3d g;
    g << p(0, 0), (p(0, 1) - v[1]) / r, p(0, 2),
         p(1, 0), (p(1, 1) + v[0]) / r, p(1, 2),
         p(2, 0), p(2, 1) / r, p(2, 2);
    return g;
}

inline double divergence(const CylJet& f, double r) { return local_gradient(f, r).trace(); }

// Cartesian components of a cylindrical vector at angle theta.
inline Eigen::Vector3d to_cartesian(const Eigen::Vector3d& v, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c * v[0] - s * v[1], s * v[0] + c * v[1], v[2]};
}

using VectorField = std::function<CylJet(double r, double theta, double z)>;

// Quadrature nodes in (r, theta, z); weight already includes the r dr dtheta dz
// volume element.
struct NodeSet {
    std::vector<double> r, theta, z, weight;

    std::size_t size() const { return r.size(); }
    void push(double r_, double t_, double z_, double w_) {
        r.push_back(r_);
        theta.push_back(t_);
        z.push_back(z_);
        weight.push_back(w_);
    }
};

// Values and local-frame gradients of m fields at N nodes. value[c] is N x m,
// grad[3 * i + j] is N x m.
struct FieldTable {
    std::array<Eigen::MatrixXd, 3> value;
    std::array<Eigen::MatrixXd, 9> grad;

    FieldTable() = default;
    FieldTable(Eigen::Index nodes, Eigen::Index fields) {
        for (auto& m : value) m = Eigen::MatrixXd::Zero(nodes, fields);
        for (auto& m : grad) m = Eigen::MatrixXd::Zero(nodes, fields);
    }
    Eigen::Index nodes() const { return value[0].rows(); }
    Eigen::Index fields() const { return value[0].cols(); }
    void set(Eigen::Index node, Eigen::Index field, const CylJet& f, double r) {
        const Eigen::Matrix3d g = local_gradient(f, r);
        for (int c = 0; c < 3; ++c) value[c](node, field) = f.value[c];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) grad[3 * i + j](node, field) = g(i, j);
    }
};

// sum_c A_c^T diag(w) B_c over the given component matrices.
template <std::size_t N>
Eigen::MatrixXd weighted_gram(const std::array<Eigen::MatrixXd, N>& a, const std::array<Eigen::MatrixXd, N>& b,
                              const Eigen::VectorXd& w) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a[0].cols(), b[0].cols());
    for (std::size_t c = 0; c < N; ++c) out.noalias() += a[c].transpose() * (w.asDiagonal() * b[c]);
    return out;
}

}  // namespace perifsi
