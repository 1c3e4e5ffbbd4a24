#include "perifsi/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "perifsi/errors.hpp"

namespace perifsi {

void CylinderConfig::validate() const {
    if (!(R > 0.0)) throw ValidationError("R > 0");
    if (!(L > 0.0)) throw ValidationError("L > 0");
    if (!(H > 0.0)) throw ValidationError("H > 0");
}

double polar_angle(double x, double y) {
    double t = std::atan2(y, x);
    if (t < 0.0) t += 2.0 * std::numbers::pi;
    return t;
}

AleJet ale_map(const CylinderConfig& cyl, const ShellField& delta, const Eigen::Vector3d& p,
               double margin) {
    if (!check_injectivity(cyl, delta, margin)) throw DomainViolation("ale_map: displacement breaks injectivity");
    const double x = p.x(), y = p.y(), z = p.z();
    const double r2 = x * x + y * y;
    const double theta = r2 > 0.0 ? polar_angle(x, y) : 0.0;
    const ShellJet d = delta(theta, z);
    const double lam = 1.0 + d.value / cyl.R;
    // d(lambda)/dx, d(lambda)/dy through theta; d(lambda)/dz directly.
    const double lx = r2 > 0.0 ? -d.d_theta / cyl.R * y / r2 : 0.0;
    const double ly = r2 > 0.0 ? d.d_theta / cyl.R * x / r2 : 0.0;
    const double lz = d.d_z / cyl.R;
    AleJet out;
    out.value = {lam * x, lam * y, z};
    out.gradient << lam + x * lx, x * ly, x * lz,
                    y * lx, lam + y * ly, y * lz,
                    0.0, 0.0, 1.0;
    out.det = out.gradient.determinant();
    return out;
}

AleJet ale_map(const CylinderConfig& cyl, const ShellField& delta, const Eigen::Vector3d& p) {
    return ale_map(cyl, delta, p, cyl.default_margin());
}

double interface_jacobian(const CylinderConfig& cyl, const ShellField& eta, double theta, double z) {
    const ShellJet e = eta(theta, z);
    const double rr = cyl.R + e.value;
    return std::sqrt((1.0 + e.d_z * e.d_z) * rr * rr + e.d_theta * e.d_theta);
}

std::pair<double, double> sampled_range(const ShellField& eta) {
    const auto& b = eta.basis();
    const int nz = 4 * b.n_z() + 1;
    const int nt = b.mode() == BoundaryMode::PeriodicTheta ? std::max(4, 4 * b.n_theta())
                                                           : 4 * b.n_theta() + 1;
    const double two_pi = 2.0 * std::numbers::pi;
    // Same tabulation as SurfaceGrid, on equispaced samples.
    QuadratureRule tr, zr;
    for (int i = 0; i < nt; ++i) {
        tr.nodes.push_back(b.mode() == BoundaryMode::PeriodicTheta ? two_pi * i / nt : two_pi * i / (nt - 1));
        tr.weights.push_back(1.0);
    }
    for (int i = 0; i < nz; ++i) {
        zr.nodes.push_back(b.length() * i / (nz - 1));
        zr.weights.push_back(1.0);
    }
    SurfaceGrid grid(eta.basis_ptr(), tr, zr);
    double lo = 0.0, hi = 0.0;
    for (const ShellJet& j : grid.evaluate(eta.coefficients())) {
        lo = std::min(lo, j.value);
        hi = std::max(hi, j.value);
    }
    return {lo, hi};
}

double sampled_sup_norm(const ShellField& eta) {
    const auto [lo, hi] = sampled_range(eta);
    return std::max(-lo, hi);
}

bool check_injectivity(const CylinderConfig& cyl, const ShellField& eta, double margin) {
    if (!(margin > 0.0 && margin < cyl.R)) throw ValidationError("0 < margin < R");
    return sampled_sup_norm(eta) < cyl.R - margin;
}

}  // namespace perifsi
