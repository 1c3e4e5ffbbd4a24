#include "perifsi/solver.hpp"

#include <cmath>

#include "perifsi/csv.hpp"
#include "perifsi/errors.hpp"

namespace perifsi {

Eigen::VectorXd GalerkinState::stacked() const {
    Eigen::VectorXd x(a.size() + a_dot.size());
    x << a, a_dot;
    return x;
}

GalerkinState GalerkinState::from_stacked(const Eigen::VectorXd& x, double t) {
    const Eigen::Index n = x.size() / 2;
    return {x.head(n), x.tail(n), t};
}

StepMatrices step_matrices(const AssembledSystem& sys, int m) {
    if (m < 0 || m >= sys.steps) throw IndexOutOfRange("step " + std::to_string(m));
    const SystemSample& s0 = sys.samples[m];
    const SystemSample& s1 = sys.samples[m + 1];
    const double t = sys.time(m) + 0.5 * sys.dt();
    StepMatrices out;
    out.mass = 0.5 * (s0.mass + s1.mass);
    out.damping = 0.5 * (s0.damping() + s1.damping());
    out.dissipation = 0.5 * (s0.dissipation + s1.dissipation);
    out.load = sys.forcing.p_in(t) * 0.5 * (s0.inlet + s1.inlet) - sys.forcing.p_out(t) * 0.5 * (s0.outlet + s1.outlet);
    return out;
}

namespace {

Eigen::MatrixXd step_operator(const StepMatrices& step, const Eigen::MatrixXd& stiffness, double dt) {
    return 2.0 * step.mass + dt * step.damping + 0.5 * dt * dt * stiffness;
}

void require_finite(const Eigen::VectorXd& x) {
    if (!x.allFinite()) throw LinearSolveFailure("non-finite step solution");
}

}  // namespace

GalerkinState midpoint_step(const StepMatrices& step, const Eigen::MatrixXd& stiffness, const GalerkinState& s,
                            double dt) {
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(step_operator(step, stiffness, dt));
    const Eigen::VectorXd x = lu.solve(2.0 * step.mass * s.a_dot - dt * stiffness * s.a + dt * step.load);
    require_finite(x);
    return {s.a + dt * x, 2.0 * x - s.a_dot, s.t + dt};
}

GalerkinState step(const AssembledSystem& sys, const GalerkinState& state, int m) {
    return midpoint_step(step_matrices(sys, m), sys.stiffness, state, sys.dt());
}

EnergyRow energy_row(const Eigen::MatrixXd& mass, const Eigen::MatrixXd& stiffness, const GalerkinState& s) {
    EnergyRow row;
    row.t = s.t;
    row.kinetic = 0.5 * s.a_dot.dot(mass * s.a_dot);
    row.elastic = 0.5 * s.a.dot(stiffness * s.a);
    row.total = row.kinetic + row.elastic;
    return row;
}

namespace {

// Completes the row ending a step with midpoint velocity (s0.a_dot + s1.a_dot)/2.
void close_step(EnergyRow& row, const EnergyRow& prev, const StepMatrices& step, const GalerkinState& s0,
                const GalerkinState& s1, double dt) {
    const Eigen::VectorXd mid = 0.5 * (s0.a_dot + s1.a_dot);
    row.dissipation = mid.dot(step.dissipation * mid);
    row.work = step.load.dot(mid);
    row.residual = row.total - prev.total + dt * row.dissipation - dt * row.work;
}

}  // namespace

Trajectory integrate(const AssembledSystem& sys, const GalerkinState& x0) {
    Trajectory out;
    GalerkinState s = x0;
    s.t = 0.0;
    out.states.push_back(s);
    out.ledger.push_back(energy_row(sys.samples[0].mass, sys.stiffness, s));
    for (int m = 0; m < sys.steps; ++m) {
        const StepMatrices sm = step_matrices(sys, m);
        GalerkinState next = midpoint_step(sm, sys.stiffness, s, sys.dt());
        next.t = sys.time(m + 1);
        EnergyRow row = energy_row(sys.samples[m + 1].mass, sys.stiffness, next);
        close_step(row, out.ledger.back(), sm, s, next, sys.dt());
        out.ledger.push_back(row);
        out.states.push_back(next);
        s = std::move(next);
    }
    return out;
}

GalerkinState poincare_map(const AssembledSystem& sys, const GalerkinState& x0) {
    GalerkinState s = x0;
    for (int m = 0; m < sys.steps; ++m) s = step(sys, s, m);
    s.t = sys.period;
    return s;
}

PeriodicSolution periodic_solve(const AssembledSystem& sys, double singular_tol) {
    const int n = sys.size();
    const double dt = sys.dt();
    // Columns 0..2n-1 carry the homogeneous flow, column 2n the forced response.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, 2 * n + 1);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, 2 * n + 1);
    a.leftCols(n).setIdentity();
    w.middleCols(n, n).setIdentity();
    for (int m = 0; m < sys.steps; ++m) {
        const StepMatrices sm = step_matrices(sys, m);
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(step_operator(sm, sys.stiffness, dt));
        Eigen::MatrixXd rhs = 2.0 * sm.mass * w - dt * sys.stiffness * a;
        rhs.col(2 * n) += dt * sm.load;
        const Eigen::MatrixXd x = lu.solve(rhs);
        if (!x.allFinite()) throw LinearSolveFailure("non-finite monodromy column");
        a += dt * x;
        w = 2.0 * x - w;
    }
    PeriodicSolution out;
    out.monodromy.resize(2 * n, 2 * n);
    out.monodromy << a.leftCols(2 * n), w.leftCols(2 * n);
    out.offset.resize(2 * n);
    out.offset << a.col(2 * n), w.col(2 * n);

    const Eigen::MatrixXd gap = Eigen::MatrixXd::Identity(2 * n, 2 * n) - out.monodromy;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(gap, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smallest = sv[sv.size() - 1], largest = std::max(sv[0], 1.0);
    if (!(smallest > singular_tol * largest))
        throw SingularMonodromy("I - monodromy is singular (sigma_min = " + format_double(smallest) + ")");
    Eigen::VectorXd x = svd.solve(out.offset);
    // Refine against a fresh Poincare map.
    for (int pass = 0; pass < 3; ++pass) {
        const Eigen::VectorXd defect = poincare_map(sys, GalerkinState::from_stacked(x)).stacked() - x;
        out.residual = defect.cwiseAbs().maxCoeff();
        if (out.residual <= 1e-14 * (1.0 + x.cwiseAbs().maxCoeff())) break;
        x += svd.solve(defect);
    }
    out.residual =
        (poincare_map(sys, GalerkinState::from_stacked(x)).stacked() - x).cwiseAbs().maxCoeff();
    out.initial = GalerkinState::from_stacked(x);
    return out;
}

Eigen::MatrixXd mass_at(const GlobalBasis& basis, const Eigen::VectorXd& delta) {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(delta.size());
    const FluidSample f = basis.tabulate(delta, zero);
    const Eigen::Map<const Eigen::VectorXd> w(f.domain.nodes().weight.data(),
                                              static_cast<Eigen::Index>(f.domain.nodes().size()));
    const Eigen::MatrixXd m = weighted_gram(f.table.value, f.table.value, w) + basis.structure_mass();
    return 0.5 * (m + m.transpose());
}

IvpResult solve_ivp(const GlobalBasis& basis, const BoundaryForcing& forcing, const GalerkinState& initial,
                    const IvpOptions& opt) {
    const int n = basis.size();
    if (initial.a.size() != n || initial.a_dot.size() != n) throw BasisMismatch("initial state dimension");
    if (!initial.a.allFinite() || !initial.a_dot.allFinite()) throw ValidationError("initial state finite");
    if (!(opt.dt > 0.0) || !(opt.horizon >= 0.0)) throw ValidationError("dt > 0 and horizon >= 0");
    const Eigen::MatrixXd& p = basis.shell_map();
    const Eigen::MatrixXd stiffness = basis.stiffness();
    // Whole number of steps; dt shrinks slightly so the last step lands on the horizon.
    const int steps = static_cast<int>(std::ceil(opt.horizon / opt.dt - 1e-9));
    const double dt = steps > 0 ? opt.horizon / steps : opt.dt;

    IvpResult out;
    GalerkinState s = initial;
    s.t = 0.0;
    Eigen::MatrixXd mass = mass_at(basis, p * s.a);  // DomainViolation here is a precondition failure
    out.trajectory.states.push_back(s);
    out.trajectory.ledger.push_back(energy_row(mass, stiffness, s));
    try {
        for (int m = 0; m < steps; ++m) {
            const double t_mid = (m + 0.5) * dt;
            Eigen::VectorXd x = s.a_dot;
            StepMatrices sm;
            bool converged = false;
            for (int it = 0; it < opt.max_picard && !converged; ++it) {
                const Eigen::VectorXd a_mid = s.a + 0.5 * dt * x;
                const SystemSample mid = assemble_sample(basis, p * a_mid, p * x, x);
                sm = {mid.mass, mid.damping(), mid.dissipation,
                      mid.load(forcing.p_in(t_mid), forcing.p_out(t_mid))};
                const Eigen::PartialPivLU<Eigen::MatrixXd> lu(step_operator(sm, stiffness, dt));
                const Eigen::VectorXd next = lu.solve(2.0 * sm.mass * s.a_dot - dt * stiffness * s.a + dt * sm.load);
                require_finite(next);
                const double change = (next - x).cwiseAbs().maxCoeff();
                converged = change <= opt.picard_tol * (1.0 + next.cwiseAbs().maxCoeff());
                x = next;
            }
            if (!converged) throw NoConvergence("midpoint iteration did not converge at t = " + std::to_string(m * dt));
            GalerkinState next{s.a + dt * x, 2.0 * x - s.a_dot, (m + 1) * dt};
            mass = mass_at(basis, p * next.a);
            EnergyRow row = energy_row(mass, stiffness, next);
            close_step(row, out.trajectory.ledger.back(), sm, s, next, dt);
            out.trajectory.ledger.push_back(row);
            out.trajectory.states.push_back(next);
            s = std::move(next);
        }
    } catch (const DomainViolation& e) {
        out.status = IvpStatus::DomainViolation;
        out.message = e.what();
    }
    out.t_reached = s.t;
    return out;
}

}  // namespace perifsi
