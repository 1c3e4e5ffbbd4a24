#include "perifsi/outer.hpp"

#include <cmath>
#include <string>

#include "perifsi/errors.hpp"
#include "perifsi/mollifier.hpp"

namespace perifsi {

void OuterConfig::validate() const {
    if (!(relaxation > 0.0 && relaxation <= 1.0)) throw ValidationError("0 < relaxation <= 1");
    if (max_iter < 1) throw ValidationError("max_iter >= 1");
    if (!(tol > 0.0)) throw ValidationError("tol > 0");
    if (!(forcing_l2_max > 0.0)) throw ValidationError("forcing_l2_max > 0");
}

namespace {

std::vector<Eigen::VectorXd> to_path(const Eigen::MatrixXd& rows) {
    std::vector<Eigen::VectorXd> out(rows.rows());
    for (Eigen::Index m = 0; m < rows.rows(); ++m) out[m] = rows.row(m).transpose();
    return out;
}

double sup(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

PeriodicRun outer_fixed_point(const GlobalBasis& basis, const BoundaryForcing& forcing, int steps,
                              const OuterConfig& config) {
    config.validate();
    const double norm = std::sqrt(forcing.l2_squared());
    if (norm > config.forcing_l2_max)
        throw NoConvergence("forcing L2 norm " + std::to_string(norm) + " exceeds the smallness bound " +
                            std::to_string(config.forcing_l2_max));
    const int n = basis.size(), n_shell = basis.shell()->size();
    const double dt = forcing.period() / steps;
    const double width = config.epsilon > 0.0 ? config.epsilon : 4.0 * dt;
    const Eigen::MatrixXd& p = basis.shell_map();

    Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(steps, n_shell), rate = delta;
    Eigen::MatrixXd transport = Eigen::MatrixXd::Zero(steps, n);
    PeriodicRun run;
    for (int it = 1; it <= config.max_iter; ++it) {
        run.path = {to_path(delta), to_path(rate), to_path(transport)};
        const AssembledSystem sys = assemble(basis, run.path, forcing, steps);
        run.solution = periodic_solve(sys);
        run.trajectory = integrate(sys, run.solution.initial);
        run.iterations = it;

        Eigen::MatrixXd a(steps, n), w(steps, n);
        for (int m = 0; m < steps; ++m) {
            a.row(m) = run.trajectory.states[m].a.transpose();
            w.row(m) = run.trajectory.states[m].a_dot.transpose();
        }
        const double keep = 1.0 - config.relaxation;
        const Eigen::MatrixXd next_delta = keep * delta + config.relaxation * mollify(a * p.transpose(), width, dt);
        const Eigen::MatrixXd next_rate = keep * rate + config.relaxation * mollify(w * p.transpose(), width, dt);
        const Eigen::MatrixXd next_transport = keep * transport + config.relaxation * mollify(w, width, dt);

        OuterIterate rec;
        rec.iteration = it;
        rec.update = std::max({sup(next_delta - delta), sup(next_rate - rate), sup(next_transport - transport)});
        rec.scale = std::max({sup(next_delta), sup(next_rate), sup(next_transport)});
        rec.periodic_residual = run.solution.residual;
        run.history.push_back(rec);
        if (rec.update <= config.tol * rec.scale + 1e-300) return run;
        for (int m = 0; m < steps; ++m) basis.require_admissible(next_delta.row(m).transpose());
        delta = next_delta;
        rate = next_rate;
        transport = next_transport;
    }
    throw NoConvergence("outer iteration did not converge in " + std::to_string(config.max_iter) + " iterations");
}

}  // namespace perifsi
