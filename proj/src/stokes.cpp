#include "perifsi/stokes.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "perifsi/errors.hpp"
#include "perifsi/quadrature.hpp"

namespace perifsi {

namespace {
constexpr double kPi = std::numbers::pi;
}

void StokesBasis::candidates(double r, double z, double* out) const {
    const int nc = candidate_count();
    std::fill(out, out + kQuantities * nc, 0.0);
    auto put = [&](int q, int c, double v) { out[q * nc + c] = v; };
    const double R = cyl_.R, R2 = R * R;
    const double s = r * r / R2;
    const double om = 1.0 - s;
    const int I = res_.radial, J = res_.axial;
    int c = 0;
    // Quantity slots: 0..2 values, 3..5 d/dr, 6..8 d/dz.
    std::vector<std::array<double, 3>> leg(I);
    for (int i = 0; i < I; ++i) leg[i] = legendre_jet(i, 2.0 * s - 1.0);

    // Through-flow: u_z = (1 - s) P_i.
    for (int i = 0; i < I; ++i, ++c) {
        const double P = leg[i][0], dP = 2.0 * leg[i][1];
        put(2, c, om * P);
        put(5, c, (-P + om * dP) * 2.0 * r / R2);
    }
    // Meridional: psi = s (1 - s)^2 P_i cos(k z).
    for (int j = 1; j <= J; ++j) {
        const double k = j * kPi / cyl_.L;
        const double sn = std::sin(k * z), cs = std::cos(k * z);
        for (int i = 0; i < I; ++i, ++c) {
            const double P = leg[i][0], dP = 2.0 * leg[i][1], ddP = 4.0 * leg[i][2];
            const double F = om * om * P;
            const double dF = -2.0 * om * P + om * om * dP;
            const double ddF = 2.0 * P - 4.0 * om * dP + om * om * ddP;
            const double f1 = F + s * dF, f2 = 2.0 * dF + s * ddF;
            put(0, c, k * r * F / R2 * sn);
            put(3, c, k * sn / R2 * (F + 2.0 * s * dF));
            put(6, c, k * k * r * F / R2 * cs);
            put(2, c, 2.0 / R2 * f1 * cs);
            put(5, c, 2.0 / R2 * f2 * 2.0 * r / R2 * cs);
            put(8, c, -2.0 / R2 * f1 * k * sn);
        }
    }
    // Swirl: u_theta = (r / R)(1 - s) P_i sin(k z).
    for (int j = 1; j <= J; ++j) {
        const double k = j * kPi / cyl_.L;
        const double sn = std::sin(k * z), cs = std::cos(k * z);
        for (int i = 0; i < I; ++i, ++c) {
            const double P = leg[i][0], dP = 2.0 * leg[i][1];
            const double h = om * P, dh = -P + om * dP;
            put(1, c, r / R * h * sn);
            put(4, c, (h + 2.0 * s * dh) / R * sn);
            put(7, c, r / R * h * k * cs);
        }
    }
}

CylJet StokesBasis::candidate(int c, double r, double, double z) const {
    std::vector<double> buf(kQuantities * candidate_count());
    candidates(r, z, buf.data());
    const int nc = candidate_count();
    CylJet out;
    for (int q = 0; q < 3; ++q) {
        out.value[q] = buf[q * nc + c];
        out.partial(q, 0) = buf[(3 + q) * nc + c];
        out.partial(q, 2) = buf[(6 + q) * nc + c];
    }
    return out;
}

CylJet StokesBasis::mode(int k, double r, double, double z) const {
    if (k < 0 || k >= size()) throw IndexOutOfRange("stokes mode " + std::to_string(k));
    const int nc = candidate_count();
    std::vector<double> buf(kQuantities * nc);
    candidates(r, z, buf.data());
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> tab(
        buf.data(), kQuantities, nc);
    const Eigen::VectorXd q = tab * coef_.col(k);
    CylJet out;
    for (int c = 0; c < 3; ++c) {
        out.value[c] = q[c];
        out.partial(c, 0) = q[3 + c];
        out.partial(c, 2) = q[6 + c];
    }
    return out;
}

VectorField StokesBasis::mode_field(int k) const {
    return [self = *this, k](double r, double theta, double z) { return self.mode(k, r, theta, z); };
}

StokesBasis::StokesBasis(const CylinderConfig& cyl, StokesResolution res, int n_modes) : cyl_(cyl), res_(res) {
    cyl_.validate();
    if (res.radial < 1 || res.axial < 1) throw ValidationError("stokes resolution >= 1");
    if (res.radial > 24) throw ValidationError("stokes radial resolution <= 24");
    if (n_modes < 1) throw ValidationError("n_interior >= 1");
    if (n_modes > candidate_count()) throw ValidationError("n_interior <= stokes candidate count");
    const int nc = candidate_count();
    const auto rr = gauss_legendre(2 * res.radial + 8, 0.0, cyl.R);
    const auto zr = gauss_legendre(2 * res.axial + 16, 0.0, cyl.L);
    const int nq = static_cast<int>(rr.size() * zr.size());
    FieldTable tab(nq, nc);
    Eigen::VectorXd w(nq);
    std::vector<double> buf(kQuantities * nc);
    int q = 0;
    for (std::size_t i = 0; i < rr.size(); ++i)
        for (std::size_t j = 0; j < zr.size(); ++j, ++q) {
            const double r = rr.nodes[i];
            w[q] = 2.0 * kPi * r * rr.weights[i] * zr.weights[j];
            candidates(r, zr.nodes[j], buf.data());
            for (int c = 0; c < nc; ++c) {
                CylJet f;
                for (int k = 0; k < 3; ++k) {
                    f.value[k] = buf[k * nc + c];
                    f.partial(k, 0) = buf[(3 + k) * nc + c];
                    f.partial(k, 2) = buf[(6 + k) * nc + c];
                }
                tab.set(q, c, f, r);
            }
        }
    Eigen::MatrixXd a = weighted_gram(tab.grad, tab.grad, w);
    Eigen::MatrixXd b = weighted_gram(tab.value, tab.value, w);
    a = 0.5 * (a + a.transpose());
    b = 0.5 * (b + b.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b);
    if (es.info() != Eigen::Success) throw EigenFailure("stokes eigenproblem did not converge");
    eig_ = es.eigenvalues().head(n_modes);
    coef_ = es.eigenvectors().leftCols(n_modes);
    if (!(eig_.minCoeff() > 0.0)) throw EigenFailure("non-positive stokes eigenvalue");
    for (int k = 0; k < n_modes; ++k) {
        auto col = coef_.col(k);
        const double big = col.cwiseAbs().maxCoeff();
        for (Eigen::Index c = 0; c < col.size(); ++c)
            if (std::abs(col[c]) > 1e-8 * big) {
                if (col[c] < 0) col *= -1.0;
                break;
            }
    }
}

StokesBasis build_stokes_basis(const CylinderConfig& cyl, StokesResolution res, int n_modes) {
    return StokesBasis(cyl, res, n_modes);
}

}  // namespace perifsi

namespace perifsi {

namespace {
// Radius power carried by each quantity (values, d/dr, d/dz of r, theta, z).
constexpr std::array<int, StokesBasis::kQuantities> kParity{1, 1, 0, 0, 0, 1, 1, 1, 0};

void chebyshev_values(double x, int n, double* t) {
    t[0] = 1.0;
    if (n > 1) t[1] = x;
    for (int d = 2; d < n; ++d) t[d] = 2.0 * x * t[d - 1] - t[d - 2];
}
}  // namespace

StokesAxialCache::StokesAxialCache(const StokesBasis& basis, std::vector<double> z_nodes)
    : R_(basis.cylinder().R), modes_(basis.size()), degree_(basis.resolution().radial + 4), z_(std::move(z_nodes)) {
    const int nc = basis.candidate_count(), nq = StokesBasis::kQuantities;
    // Chebyshev points of the first kind in x = 2s - 1 avoid the axis.
    std::vector<double> xs(degree_);
    Eigen::MatrixXd vander(degree_, degree_);
    for (int i = 0; i < degree_; ++i) {
        xs[i] = std::cos(kPi * (i + 0.5) / degree_);
        std::vector<double> t(degree_);
        chebyshev_values(xs[i], degree_, t.data());
        for (int d = 0; d < degree_; ++d) vander(i, d) = t[d];
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(vander);
    std::vector<double> buf(nq * nc);
    for (double z : z_) {
        Eigen::MatrixXd samples(degree_, nq * modes_);
        for (int i = 0; i < degree_; ++i) {
            const double r = R_ * std::sqrt(0.5 * (xs[i] + 1.0));
            basis.candidates(r, z, buf.data());
            const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> tab(
                buf.data(), nq, nc);
            const Eigen::MatrixXd q = tab * basis.coefficients();
            for (int a = 0; a < nq; ++a)
                for (int k = 0; k < modes_; ++k) samples(i, a * modes_ + k) = q(a, k) / (kParity[a] ? r : 1.0);
        }
        coef_.push_back(lu.solve(samples).transpose());
    }
}

void StokesAxialCache::evaluate(int iz, double r, Eigen::MatrixXd& out) const {
    std::array<double, 32> t{};
    const double s = r * r / (R_ * R_);
    chebyshev_values(2.0 * s - 1.0, degree_, t.data());
    const Eigen::Map<const Eigen::VectorXd> tv(t.data(), degree_);
    const Eigen::VectorXd all = coef_[iz] * tv;
    out.resize(StokesBasis::kQuantities, modes_);
    for (int a = 0; a < StokesBasis::kQuantities; ++a)
        for (int k = 0; k < modes_; ++k) out(a, k) = all[a * modes_ + k] * (kParity[a] ? r : 1.0);
}

CylJet StokesAxialCache::mode(int iz, int k, double r) const {
    Eigen::MatrixXd q;
    evaluate(iz, r, q);
    CylJet out;
    for (int c = 0; c < 3; ++c) {
        out.value[c] = q(c, k);
        out.partial(c, 0) = q(3 + c, k);
        out.partial(c, 2) = q(6 + c, k);
    }
    return out;
}

}  // namespace perifsi
