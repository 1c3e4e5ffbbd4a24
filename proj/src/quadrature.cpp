#include "perifsi/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace perifsi {

namespace {

// Nodes and weights on [-1, 1], computed by Newton iteration on P_n.
std::pair<std::vector<double>, std::vector<double>> reference_rule(int n) {
    static std::mutex mutex;
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;

    std::vector<double> x(n), w(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // Recompute derivative at the converged node.
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    if (n % 2 == 1) x[n / 2] = 0.0;
    cache.emplace(n, std::make_pair(x, w));
    return {x, w};
}

}  // namespace

QuadratureRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    auto [x, w] = reference_rule(n);
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = mid + half * x[i];
        rule.weights[i] = half * w[i];
    }
    return rule;
}

QuadratureRule composite_gauss(int n_per_panel, const std::vector<double>& breaks) {
    QuadratureRule rule;
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        auto panel = gauss_legendre(n_per_panel, breaks[p], breaks[p + 1]);
        rule.nodes.insert(rule.nodes.end(), panel.nodes.begin(), panel.nodes.end());
        rule.weights.insert(rule.weights.end(), panel.weights.begin(), panel.weights.end());
    }
    return rule;
}

QuadratureRule periodic_trapezoid(int n, double period, double start) {
    if (n < 1) throw std::invalid_argument("periodic_trapezoid: n must be >= 1");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.assign(n, period / n);
    for (int i = 0; i < n; ++i) rule.nodes[i] = start + period * i / n;
    return rule;
}

std::array<double, 3> legendre_jet(int n, double x) {
    // Recurrences for P, P' and P'' together.
    double p0 = 1.0, p1 = x, d0 = 0.0, d1 = 1.0, s0 = 0.0, s1 = 0.0;
    if (n == 0) return {1.0, 0.0, 0.0};
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        const double d2 = ((2.0 * k - 1.0) * (p1 + x * d1) - (k - 1.0) * d0) / k;
        const double s2 = ((2.0 * k - 1.0) * (2.0 * d1 + x * s1) - (k - 1.0) * s0) / k;
        p0 = p1, p1 = p2, d0 = d1, d1 = d2, s0 = s1, s1 = s2;
    }
    return {p1, d1, s1};
}

}  // namespace perifsi
