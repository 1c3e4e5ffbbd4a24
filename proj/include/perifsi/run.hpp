#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "perifsi/config.hpp"
#include "perifsi/csv.hpp"
#include "perifsi/errors.hpp"

namespace perifsi {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,          // invalid input, failed verification, other errors
    kExitDomainViolation = 2,
    kExitNoConvergence = 3,
    kExitResonance = 4,
};

int exit_code_for(const Error& e);
// One line, key=value fields: error=<kind> exit=<code> message="<text>".
std::string error_line(const Error& e);

// The oscillator of the first solid interior mode with its period moved to the
// discrete resonance of the time grid (used by model = solid-mode).
AssembledSystem solid_mode_system(const GlobalBasis& basis, const RunConfig& config);

CsvTable energies_table(const EnergyLedger& ledger);
CsvTable coefficients_table(const std::vector<GalerkinState>& states);

struct PeriodicSummary {
    double sup_energy = 0.0, integral_dissipation = 0.0, forcing_l2 = 0.0;
    double diffusion_ratio = 0.0;  // nan for zero forcing
    double periodic_residual = 0.0;
    int outer_iterations = 0;
};
CsvTable summary_table(const PeriodicSummary& s);

// Each writes its artifacts into out_dir and throws on failure (the IVP
// reports a domain violation through its status instead).
PeriodicSummary run_periodic(const RunConfig& config, const std::filesystem::path& out_dir);
IvpResult run_ivp(const RunConfig& config, const std::filesystem::path& out_dir);
// True iff every check passed.
bool run_verify(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

// Dispatches on config.mode, maps errors to exit codes and reports them on err.
int run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log, std::ostream& err);

}  // namespace perifsi
