#pragma once

#include <array>
#include <vector>

namespace perifsi {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
    // Sum of weights times f(node).
    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }
};

// n-point Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

// Gauss-Legendre on each of the consecutive panels [breaks[i], breaks[i+1]].
QuadratureRule composite_gauss(int n_per_panel, const std::vector<double>& breaks);

// Periodic trapezoid rule with n equispaced nodes starting at `start`.
QuadratureRule periodic_trapezoid(int n, double period, double start = 0.0);

// Legendre polynomial P_n and its first two derivatives at x.
std::array<double, 3> legendre_jet(int n, double x);

}  // namespace perifsi
