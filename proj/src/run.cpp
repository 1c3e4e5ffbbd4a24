#include "perifsi/run.hpp"

#include <cmath>
#include <ostream>

#include "perifsi/diagnostics.hpp"
#include "perifsi/verify.hpp"

namespace perifsi {

int exit_code_for(const Error& e) {
    if (dynamic_cast<const DomainViolation*>(&e)) return kExitDomainViolation;
    if (dynamic_cast<const NoConvergence*>(&e)) return kExitNoConvergence;
    if (dynamic_cast<const SingularMonodromy*>(&e)) return kExitResonance;
    return kExitFailure;
}

std::string error_line(const Error& e) {
    std::string message = e.what();
    for (char& c : message)
        if (c == '\n' || c == '\r') c = ' ';
        else if (c == '"') c = '\'';
    return "error=" + e.kind() + " exit=" + std::to_string(exit_code_for(e)) + " message=\"" + message + "\"";
}

AssembledSystem solid_mode_system(const GlobalBasis& basis, const RunConfig& config) {
    int k = -1;
    for (int i = 0; i < basis.size() && k < 0; ++i)
        if (basis.entries()[i].kind == EntryKind::Interior) k = i;
    if (k < 0) throw ValidationError("n_interior >= 1");
    const double mass = basis.structure_mass()(k, k), stiffness = basis.solid_elastic()(k, k);
    const double period = resonant_period(mass, stiffness, config.n_t);
    const BoundaryForcing f = config.forcing();
    return single_mode_system(mass, basis.solid_viscous()(k, k), stiffness,
                              BoundaryForcing(period, f.inlet(), f.outlet()), config.n_t);
}

CsvTable energies_table(const EnergyLedger& ledger) {
    CsvTable t{{"t", "E_kin", "E_el", "E", "D", "work_rate", "balance_residual"}, {}};
    for (const EnergyRow& r : ledger)
        t.rows.push_back({format_double(r.t), format_double(r.kinetic), format_double(r.elastic),
                          format_double(r.total), format_double(r.dissipation), format_double(r.work),
                          format_double(r.residual)});
    return t;
}

CsvTable coefficients_table(const std::vector<GalerkinState>& states) {
    CsvTable t{{"t"}, {}};
    const int n = states.empty() ? 0 : static_cast<int>(states.front().a.size());
    for (int k = 1; k <= n; ++k) t.header.push_back("a_" + std::to_string(k));
    for (int k = 1; k <= n; ++k) t.header.push_back("adot_" + std::to_string(k));
    for (const GalerkinState& s : states) {
        std::vector<std::string> row{format_double(s.t)};
        for (double x : s.a) row.push_back(format_double(x));
        for (double x : s.a_dot) row.push_back(format_double(x));
        t.rows.push_back(std::move(row));
    }
    return t;
}

CsvTable summary_table(const PeriodicSummary& s) {
    return {{"sup_E", "integral_D", "forcing_L2", "diffusion_ratio", "periodic_residual", "outer_iters"},
            {{format_double(s.sup_energy), format_double(s.integral_dissipation), format_double(s.forcing_l2),
              format_double(s.diffusion_ratio), format_double(s.periodic_residual),
              std::to_string(s.outer_iterations)}}};
}

namespace {

PeriodicSummary summarize(const Trajectory& traj, const BoundaryForcing& forcing, double residual, int iterations) {
    PeriodicSummary s;
    s.sup_energy = sup_energy(traj.ledger);
    s.integral_dissipation = integrated_dissipation(traj.ledger);
    s.forcing_l2 = std::sqrt(forcing.l2_squared());
    s.diffusion_ratio = forcing.is_zero() ? std::nan("") : diffusion_ratio(traj.ledger, forcing);
    s.periodic_residual = residual;
    s.outer_iterations = iterations;
    return s;
}

void write_trajectory(const Trajectory& traj, const std::filesystem::path& dir) {
    write_csv(dir / "energies.csv", energies_table(traj.ledger));
    write_csv(dir / "coefficients.csv", coefficients_table(traj.states));
}

}  // namespace

PeriodicSummary run_periodic(const RunConfig& config, const std::filesystem::path& out_dir) {
    config.validate();
    std::filesystem::create_directories(out_dir);
    const GlobalBasis basis(config.discretization());
    Trajectory traj;
    PeriodicSummary summary;
    if (config.model == Model::SolidMode) {
        const AssembledSystem sys = solid_mode_system(basis, config);
        const PeriodicSolution sol = periodic_solve(sys);
        traj = integrate(sys, sol.initial);
        summary = summarize(traj, sys.forcing, sol.residual, 0);
    } else {
        const BoundaryForcing forcing = config.forcing();
        const PeriodicRun run = outer_fixed_point(basis, forcing, config.n_t, config.outer);
        traj = run.trajectory;
        summary = summarize(traj, forcing, run.solution.residual, run.iterations);
    }
    write_trajectory(traj, out_dir);
    write_csv(out_dir / "summary.csv", summary_table(summary));
    return summary;
}

IvpResult run_ivp(const RunConfig& config, const std::filesystem::path& out_dir) {
    config.validate();
    std::filesystem::create_directories(out_dir);
    const GlobalBasis basis(config.discretization());
    const IvpResult result = solve_ivp(basis, config.forcing(), config.ivp_initial(basis.size()), config.ivp_options());
    write_trajectory(result.trajectory, out_dir);
    const bool ok = result.status == IvpStatus::Completed;
    std::string message = result.message;
    for (char& c : message)
        if (c == ',' || c == '\n' || c == '"') c = ' ';
    write_csv(out_dir / "ivp_status.csv", {{"status", "t_reached", "message"},
                                           {{ok ? "completed" : "domain_violation", format_double(result.t_reached),
                                             message}}});
    return result;
}

bool run_verify(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log) {
    config.validate();
    std::filesystem::create_directories(out_dir);
    VerifyOptions opt;
    opt.on_result = [&](const CheckResult& c) {
        log << (c.pass ? "pass " : "FAIL ") << c.name << " measured=" << format_double(c.measured)
            << " tolerance=" << format_double(c.tolerance) << std::endl;
    };
    const std::vector<CheckResult> results = run_verification(config, opt);
    write_csv(out_dir / "verify_report.csv", report_table(results));
    for (const CheckResult& c : results)
        if (!c.pass) return false;
    return true;
}

int run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log, std::ostream& err) {
    try {
        switch (config.mode) {
            case RunMode::Periodic:
                run_periodic(config, out_dir);
                return kExitOk;
            case RunMode::Ivp: {
                const IvpResult r = run_ivp(config, out_dir);
                if (r.status == IvpStatus::Completed) return kExitOk;
                err << "error=DomainViolation exit=" << kExitDomainViolation << " t_reached=" << format_double(r.t_reached)
                    << '\n';
                return kExitDomainViolation;
            }
            case RunMode::Verify:
                return run_verify(config, out_dir, log) ? kExitOk : kExitFailure;
        }
    } catch (const Error& e) {
        err << error_line(e) << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error=Internal exit=" << kExitFailure << " message=\"" << e.what() << "\"\n";
        return kExitFailure;
    }
    return kExitFailure;
}

}  // namespace perifsi
