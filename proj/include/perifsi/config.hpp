#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "perifsi/assembly.hpp"
#include "perifsi/outer.hpp"
#include "perifsi/solver.hpp"

namespace perifsi {

enum class RunMode { Periodic, Ivp, Verify };

// Full coupled system, or the single solid-interior-mode oscillator whose
// period is tuned to the discrete resonance of the time grid.
enum class Model { Full, SolidMode };

struct RunConfig {
    RunMode mode = RunMode::Periodic;
    std::uint64_t seed = 0;

    CylinderConfig geometry;
    SolidParams solid;
    Model model = Model::Full;
    // Normalized densities and viscosity; only the value 1 is supported.
    double rho_f = 1.0, mu = 1.0, rho_s_h = 1.0;

    BoundaryMode boundary = BoundaryMode::PeriodicTheta;
    int n_theta = 1;
    int n_z = 8;
    int n_r_fluid = 8;
    int n_r_solid = 4;
    int n_interior = 16;
    int n_t = 256;
    int stokes_radial = 6;
    int stokes_axial = 16;
    int oversample = 1;

    double period = 1.0;
    std::vector<Harmonic> p_in{{0.05, 1, 0.0}};
    std::vector<Harmonic> p_out;
    std::vector<double> p_in_samples, p_out_samples;  // override the harmonic lists when set

    OuterConfig outer;
    double margin = -1.0;  // injectivity margin, <= 0 means the geometry default

    double ivp_dt = -1.0;       // <= 0 means period / n_t
    double ivp_horizon = -1.0;  // <= 0 means one period
    double ivp_displacement = 0.0;  // random initial coefficients of this size
    double ivp_velocity = 0.0;
    int ivp_max_picard = 60;
    double ivp_picard_tol = 1e-12;

    // Throws ValidationError naming the first violated invariant.
    void validate() const;

    Discretization discretization() const;
    BoundaryForcing forcing() const;
    IvpOptions ivp_options() const;
    // Initial IVP state drawn from the seed.
    GalerkinState ivp_initial(int size) const;

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);
// Canonical text: every key in fixed order, doubles in shortest round-trip form.
std::string emit_config(const RunConfig& config);

std::string_view to_string(RunMode mode);

}  // namespace perifsi
