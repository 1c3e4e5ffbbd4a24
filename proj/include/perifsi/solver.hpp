#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "perifsi/assembly.hpp"

namespace perifsi {

struct GalerkinState {
    Eigen::VectorXd a, a_dot;
    double t = 0.0;

    static GalerkinState zero(int n, double t = 0.0) {
        return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), t};
    }
    // Stacked (a, a_dot).
    Eigen::VectorXd stacked() const;
    static GalerkinState from_stacked(const Eigen::VectorXd& x, double t = 0.0);
};

// Linear data of one implicit-midpoint step.
struct StepMatrices {
    Eigen::MatrixXd mass, damping, dissipation;
    Eigen::VectorXd load;
};

// Midpoint data of step m of a sampled system (endpoint averages, load at the
// midpoint time).
StepMatrices step_matrices(const AssembledSystem& sys, int m);

// Solves for the midpoint velocity and advances:
// M (w1 - w0)/dt + C (w0 + w1)/2 + K (a0 + a1)/2 = f, a1 = a0 + dt (w0 + w1)/2.
GalerkinState midpoint_step(const StepMatrices& step, const Eigen::MatrixXd& stiffness, const GalerkinState& state,
                            double dt);

// Step m of the sampled system, from t_m to t_{m+1}.
GalerkinState step(const AssembledSystem& sys, const GalerkinState& state, int m);

struct EnergyRow {
    double t = 0.0;
    double kinetic = 0.0, elastic = 0.0, total = 0.0;
    double dissipation = 0.0, work = 0.0;  // midpoint rates of the step ending at t
    double residual = 0.0;                  // E(t) - E(t - dt) + dt D - dt work
};
using EnergyLedger = std::vector<EnergyRow>;

EnergyRow energy_row(const Eigen::MatrixXd& mass, const Eigen::MatrixXd& stiffness, const GalerkinState& s);

struct Trajectory {
    std::vector<GalerkinState> states;  // t_0 .. t_end
    EnergyLedger ledger;
};

// One period from x0, with the energy ledger.
Trajectory integrate(const AssembledSystem& sys, const GalerkinState& x0);
GalerkinState poincare_map(const AssembledSystem& sys, const GalerkinState& x0);

struct PeriodicSolution {
    GalerkinState initial;
    double residual = 0.0;          // |P(x*) - x*|, sup norm
    Eigen::MatrixXd monodromy;
    Eigen::VectorXd offset;         // P(0)
};

// Fixed point of the Poincare map through the monodromy matrix. Throws
// SingularMonodromy when I - A is numerically singular.
PeriodicSolution periodic_solve(const AssembledSystem& sys, double singular_tol = 1e-10);

enum class IvpStatus { Completed, DomainViolation };

struct IvpResult {
    Trajectory trajectory;
    IvpStatus status = IvpStatus::Completed;
    double t_reached = 0.0;
    std::string message;
};

struct IvpOptions {
    double dt = 1.0 / 256;
    double horizon = 1.0;
    int max_picard = 60;
    double picard_tol = 1e-12;
};

// Fully coupled problem: geometry, its rate and the convecting field all come
// from the state itself; each step iterates on the midpoint velocity.
IvpResult solve_ivp(const GlobalBasis& basis, const BoundaryForcing& forcing, const GalerkinState& initial,
                    const IvpOptions& options);

// Fluid + structure mass at the geometry given by shell coefficients.
Eigen::MatrixXd mass_at(const GlobalBasis& basis, const Eigen::VectorXd& delta);

}  // namespace perifsi
