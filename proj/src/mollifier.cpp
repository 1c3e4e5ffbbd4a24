#include "perifsi/mollifier.hpp"

#include <cmath>
#include <numbers>

#include "perifsi/errors.hpp"
#include "perifsi/quadrature.hpp"

namespace perifsi {

namespace {
double bump(double x) { return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; }
}  // namespace

std::vector<double> bump_weights(double width, double spacing) {
    if (!(width > 0.0) || !(spacing > 0.0)) throw ValidationError("epsilon > 0");
    const int reach = static_cast<int>(std::ceil(width / spacing)) - 1;
    std::vector<double> w(2 * std::max(reach, 0) + 1);
    double total = 0.0;
    for (int j = -reach; j <= reach; ++j) total += w[j + reach] = bump(j * spacing / width);
    for (double& v : w) v /= total;
    return w;
}

Eigen::MatrixXd mollify(const Eigen::MatrixXd& path, double width, double spacing) {
    const auto w = bump_weights(width, spacing);
    const int n = static_cast<int>(path.rows());
    const int reach = static_cast<int>(w.size()) / 2;
    Eigen::MatrixXd out = path;
    if (reach == 0 || n == 0) return out;
    // x_i + sum w_j (x_{i+j} - x_i): constants are reproduced bit for bit.
    for (int i = 0; i < n; ++i)
        for (int j = -reach; j <= reach; ++j) {
            if (j == 0) continue;
            const int src = ((i + j) % n + n) % n;
            out.row(i) += w[j + reach] * (path.row(src) - path.row(i));
        }
    return out;
}

std::vector<double> mollify(const std::vector<double>& signal, double width, double spacing) {
    const Eigen::Map<const Eigen::VectorXd> in(signal.data(), static_cast<Eigen::Index>(signal.size()));
    const Eigen::VectorXd out = mollify(Eigen::MatrixXd(in), width, spacing);
    return {out.data(), out.data() + out.size()};
}

ShellField mollify(const ShellField& field, double width) {
    if (!(width > 0.0)) throw ValidationError("epsilon > 0");
    const ShellBasis& basis = field.basis();
    if (basis.mode() != BoundaryMode::PeriodicTheta) return field;
    const double half = std::min(width, std::numbers::pi);
    const auto rule = gauss_legendre(64, -half, half);
    const double mass = rule.integrate([&](double s) { return bump(s / half); });
    ShellField out = field;
    for (int k = 0; k < basis.size(); ++k) {
        const int m = basis.theta_family().harmonic(basis.theta_index(k));
        if (m == 0) continue;
        // Even kernel: cos and sin harmonics both scale by its cosine moment.
        out.coefficients()[k] *= rule.integrate([&](double s) { return bump(s / half) * std::cos(m * s); }) / mass;
    }
    return out;
}

}  // namespace perifsi
