#include "perifsi/diagnostics.hpp"

#include <cmath>

#include "perifsi/errors.hpp"

namespace perifsi {

EnergyBreakdown energy(const GlobalBasis& basis, const GalerkinState& state, const ShellField& geometry,
                       double p_in, double p_out) {
    if (state.a.size() != basis.size() || state.a_dot.size() != basis.size()) throw BasisMismatch("state dimension");
    require_same_basis(geometry, ShellField::zero(basis.shell()));
    const Discretization& disc = basis.discretization();
    const Reconstruction rec = reconstruct(basis, state.a, state.a_dot, geometry);
    EnergyBreakdown out;

    const FluidDomain domain(disc.cyl, geometry, {disc.fluid_per_panel, disc.oversample});
    const NodeSet& fn = domain.nodes();
    double fluid_kin = 0.0, fluid_diss = 0.0;
    for (std::size_t i = 0; i < fn.size(); ++i) {
        const CylJet u = rec.fluid(fn.r[i], fn.theta[i], fn.z[i]);
        fluid_kin += fn.weight[i] * u.value.squaredNorm();
        fluid_diss += fn.weight[i] * local_gradient(u, fn.r[i]).squaredNorm();
    }
    out.work_rate = boundary_load(domain, rec.fluid, p_in, p_out);

    const SurfaceGrid grid = SurfaceGrid::standard(basis.shell(), disc.oversample);
    const std::vector<ShellJet> rate = grid.evaluate(rec.eta_rate.coefficients());
    double shell_kin = 0.0;
    for (int node = 0; node < grid.size(); ++node) shell_kin += grid.weight(node) * rate[node].value * rate[node].value;
    const double shell_el = biharmonic_form(rec.eta, rec.eta);

    const SolidBasis& solid = *basis.solid();
    const SolidParams& sp = solid.params();
    const NodeSet& sn = solid.nodes();
    double solid_kin = 0.0, solid_grad = 0.0, solid_div = 0.0, solid_visc = 0.0;
    for (std::size_t i = 0; i < sn.size(); ++i) {
        const double r = sn.r[i];
        const CylJet d = rec.solid(r, sn.theta[i], sn.z[i]);
        const CylJet v = rec.solid_rate(r, sn.theta[i], sn.z[i]);
        const Eigen::Matrix3d gd = local_gradient(d, r), gv = local_gradient(v, r);
        solid_kin += sn.weight[i] * v.value.squaredNorm();
        solid_grad += sn.weight[i] * gd.squaredNorm();
        solid_div += sn.weight[i] * gd.trace() * gd.trace();
        solid_visc += sn.weight[i] * gv.squaredNorm();
    }
    out.kinetic = 0.5 * (fluid_kin + shell_kin + sp.rho_s2 * solid_kin);
    out.elastic = 0.5 * (shell_el + sp.lambda1 * solid_grad + sp.lambda2 * solid_div);
    out.total = out.kinetic + out.elastic;
    out.dissipation = fluid_diss + sp.lambda1 * sp.delta_visc * solid_visc;
    return out;
}

double balance_residual(const EnergyLedger& ledger, int first, int last) {
    if (first < 0 || last >= static_cast<int>(ledger.size()) || first > last)
        throw IndexOutOfRange("ledger slice");
    double sum = ledger[last].total - ledger[first].total;
    for (int m = first + 1; m <= last; ++m)
        sum += (ledger[m].t - ledger[m - 1].t) * (ledger[m].dissipation - ledger[m].work);
    return std::abs(sum);
}

double korn_check(const FluidDomain& domain, const VectorField& u, const VectorField& q) {
    const double full = dirichlet_form(domain, u, q);
    return std::abs(full - symmetric_gradient_form(domain, u, q)) / (1.0 + std::abs(full));
}

CouplingResiduals coupling_residuals(const GlobalBasis& basis, const GalerkinState& state, const ShellField& geometry) {
    const Reconstruction rec = reconstruct(basis, state.a, state.a_dot, geometry);
    const CylinderConfig& cyl = basis.cylinder();
    const SurfaceGrid& grid = *basis.grid();
    const std::vector<ShellJet> delta = grid.evaluate(geometry.coefficients());
    const std::vector<ShellJet> eta = grid.evaluate(rec.eta.coefficients());
    const std::vector<ShellJet> rate = grid.evaluate(rec.eta_rate.coefficients());
    CouplingResiduals out;
    for (int node = 0; node < grid.size(); ++node) {
        const double theta = grid.theta().nodes[node / grid.n_z()], z = grid.z().nodes[node % grid.n_z()];
        const Eigen::Vector3d u = rec.fluid(cyl.R + delta[node].value, theta, z).value;
        const Eigen::Vector3d d = rec.solid(cyl.R, theta, z).value;
        out.fluid_shell = std::max(out.fluid_shell, (u - Eigen::Vector3d(rate[node].value, 0, 0)).cwiseAbs().maxCoeff());
        out.solid_shell = std::max(out.solid_shell, (d - Eigen::Vector3d(eta[node].value, 0, 0)).cwiseAbs().maxCoeff());
        out.tangential = std::max({out.tangential, std::abs(u[1]), std::abs(u[2])});
    }
    return out;
}

double integrated_dissipation(const EnergyLedger& ledger) {
    double sum = 0.0;
    for (std::size_t m = 1; m < ledger.size(); ++m) sum += (ledger[m].t - ledger[m - 1].t) * ledger[m].dissipation;
    return sum;
}

double sup_energy(const EnergyLedger& ledger) {
    double sup = 0.0;
    for (const EnergyRow& row : ledger) sup = std::max(sup, row.total);
    return sup;
}

double diffusion_ratio(const EnergyLedger& ledger, const BoundaryForcing& forcing) {
    const double denom = forcing.l2_squared();
    if (!(denom > 0.0)) throw ZeroForcing("diffusion ratio needs nonzero forcing");
    return integrated_dissipation(ledger) / denom;
}

}  // namespace perifsi
