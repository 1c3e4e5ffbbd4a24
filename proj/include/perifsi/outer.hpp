#pragma once

#include <vector>

#include "perifsi/solver.hpp"

namespace perifsi {

struct OuterConfig {
    double epsilon = -1.0;       // mollification half-width in time; <= 0 means 4 dt
    double relaxation = 0.5;
    int max_iter = 50;
    double tol = 1e-8;
    double forcing_l2_max = 1.0; // smallness gate on the forcing L2 norm

    void validate() const;
    bool operator==(const OuterConfig&) const = default;
};

struct OuterIterate {
    int iteration = 0;
    double update = 0.0;             // sup-norm change of (delta, delta rate, convecting field)
    double scale = 0.0;              // sup norm of the new iterate
    double periodic_residual = 0.0;
};

struct PeriodicRun {
    PeriodicSolution solution;
    Trajectory trajectory;
    CouplingPath path;               // coupling data the final solution was computed with
    std::vector<OuterIterate> history;
    int iterations = 0;
};

// Damped fixed point on the coupling data (delta, d delta/dt, convecting field):
// solve the linearized periodic problem, mollify the resulting (eta, d eta/dt,
// velocity) paths in time, relax. Throws DomainViolation or NoConvergence.
PeriodicRun outer_fixed_point(const GlobalBasis& basis, const BoundaryForcing& forcing, int steps,
                              const OuterConfig& config);

}  // namespace perifsi
