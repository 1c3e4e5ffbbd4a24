#pragma once

#include "perifsi/solver.hpp"

namespace perifsi {

struct EnergyBreakdown {
    double kinetic = 0.0, elastic = 0.0, total = 0.0;
    double dissipation = 0.0;
    double work_rate = 0.0;
};

// Energies of the reconstructed fields by pointwise quadrature on the domain
// of `geometry`, independent of the assembled matrices. Pressures p_in, p_out
// weight the boundary work.
EnergyBreakdown energy(const GlobalBasis& basis, const GalerkinState& state, const ShellField& geometry,
                       double p_in = 0.0, double p_out = 0.0);

// |E(t_last) - E(t_first) + sum dt (D - work)| over ledger rows first..last.
double balance_residual(const EnergyLedger& ledger, int first, int last);

// |int grad u : grad q - 2 int D(u) : D(q)| / (1 + |int grad u : grad q|)
double korn_check(const FluidDomain& domain, const VectorField& u, const VectorField& q);

struct CouplingResiduals {
    double fluid_shell = 0.0;   // |tr u - d eta/dt e_r|
    double solid_shell = 0.0;   // |d(R) - eta e_r|
    double tangential = 0.0;    // tangential part of tr u
};

// Sup norms over the interface nodes of the surface grid.
CouplingResiduals coupling_residuals(const GlobalBasis& basis, const GalerkinState& state, const ShellField& geometry);

// int D dt / int (P_in^2 + P_out^2) dt. Throws ZeroForcing for zero forcing.
double diffusion_ratio(const EnergyLedger& ledger, const BoundaryForcing& forcing);

// int D dt over the ledger (rectangle rule on step midpoints).
double integrated_dissipation(const EnergyLedger& ledger);
double sup_energy(const EnergyLedger& ledger);

}  // namespace perifsi
