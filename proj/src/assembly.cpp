#include "perifsi/assembly.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "perifsi/errors.hpp"
#include "perifsi/piola.hpp"

namespace perifsi {

int worker_threads() {
    if (const char* env = std::getenv("PERIFSI_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

void validate(const Discretization& d) {
    d.cyl.validate();
    d.solid.validate();
    if (d.n_theta < 1) throw ValidationError("N_theta >= 1");
    if (d.n_z < 1) throw ValidationError("N_z >= 1");
    if (d.fluid_per_panel < 2) throw ValidationError("N_r_fluid >= 2");
    if (d.solid_radial < 1) throw ValidationError("N_r_solid >= 1");
    if (d.n_interior < 1) throw ValidationError("n_interior >= 1");
    if (d.oversample < 1) throw ValidationError("oversample >= 1");
    if (d.margin > 0.0 && d.margin >= d.cyl.R) throw ValidationError("margin < R");
}

CylJet stokes_jet(const Eigen::MatrixXd& q, int k) {
    CylJet out;
    for (int c = 0; c < 3; ++c) {
        out.value[c] = q(c, k);
        out.partial(c, 0) = q(3 + c, k);
        out.partial(c, 2) = q(6 + c, k);
    }
    return out;
}

Eigen::VectorXd unit(int size, int k) { return Eigen::VectorXd::Unit(size, k); }

}  // namespace

GlobalBasis::GlobalBasis(const Discretization& disc) : disc_(disc) {
    validate(disc_);
    const CylinderConfig& cyl = disc_.cyl;
    shell_ = std::make_shared<ShellBasis>(disc_.boundary, disc_.n_theta, disc_.n_z, cyl.L);
    solid_ = std::make_shared<SolidBasis>(cyl, disc_.solid, shell_, disc_.solid_radial, disc_.n_interior);
    stokes_ = std::make_shared<StokesBasis>(cyl, disc_.stokes, disc_.n_interior);
    grid_ = std::make_shared<SurfaceGrid>(SurfaceGrid::standard(shell_, disc_.oversample));
    stokes_cache_ = std::make_shared<StokesAxialCache>(*stokes_, grid_->z().nodes);
    full_ = std::make_shared<FullIntegrals>(*shell_);
    for (int node = 0; node < grid_->size(); ++node)
        columns_.emplace_back(*shell_, grid_->theta().nodes[node / grid_->n_z()], grid_->z().nodes[node % grid_->n_z()]);
    for (double theta : grid_->theta().nodes) {
        inlet_columns_.emplace_back(*shell_, theta, 0.0);
        outlet_columns_.emplace_back(*shell_, theta, cyl.L);
    }

    const int n_shell = shell_->size(), n_inner = disc_.n_interior;
    for (int j = 0; j < std::max(n_shell, n_inner); ++j) {
        if (j < n_shell) entries_.push_back({EntryKind::Coupled, j});
        if (j < n_inner) entries_.push_back({EntryKind::Interior, j});
    }
    const int n = size();
    shell_map_ = Eigen::MatrixXd::Zero(n_shell, n);
    solid_map_ = Eigen::MatrixXd::Zero(solid_->size(), n);
    for (int k = 0; k < n; ++k) {
        const BasisEntry& e = entries_[k];
        if (e.kind == EntryKind::Coupled) {
            shell_map_(e.index, k) = 1.0;
            solid_map_(e.index, k) = 1.0;
        } else {
            solid_map_(solid_->n_lifted() + e.index, k) = 1.0;
        }
    }
    const Eigen::MatrixXd gram = shell_gram_matrix(*shell_);
    structure_mass_ = shell_map_.transpose() * gram * shell_map_ +
                      solid_map_.transpose() * solid_->mass_matrix() * solid_map_;
    shell_stiffness_ = shell_map_.transpose() * shell_stiffness_matrix(*shell_) * shell_map_;
    solid_elastic_ = solid_map_.transpose() * solid_->elastic_matrix() * solid_map_;
    solid_viscous_ = solid_map_.transpose() * solid_->viscous_matrix() * solid_map_;
    // Interior end-disk fluxes do not depend on the geometry.
    const FluidDomain still(cyl, ShellField::zero(shell_), {disc_.fluid_per_panel, disc_.oversample});
    interior_inlet_ = Eigen::VectorXd::Zero(n_inner);
    interior_outlet_ = Eigen::VectorXd::Zero(n_inner);
    for (std::size_t p = 0; p < still.inlet().size(); ++p)
        for (int i = 0; i < n_inner; ++i) {
            const NodeSet& in = still.inlet();
            const NodeSet& out = still.outlet();
            interior_inlet_[i] -= in.weight[p] * stokes_->mode(i, in.r[p], in.theta[p], in.z[p]).value[2];
            interior_outlet_[i] += out.weight[p] * stokes_->mode(i, out.r[p], out.theta[p], out.z[p]).value[2];
        }
    Eigen::MatrixXd values(grid_->size(), n_shell);
    for (int node = 0; node < grid_->size(); ++node)
        for (int j = 0; j < n_shell; ++j) values(node, j) = grid_->mode(j, node).value;
    shell_values_ = values * shell_map_;
}

ShellField GlobalBasis::shell_field(const Eigen::VectorXd& a) const {
    if (a.size() != size()) throw BasisMismatch("coefficient vector has wrong length");
    return ShellField(shell_, shell_map_ * a);
}

SolidField GlobalBasis::solid_field(const Eigen::VectorXd& a) const {
    if (a.size() != size()) throw BasisMismatch("coefficient vector has wrong length");
    return SolidField(solid_, solid_map_ * a);
}

void GlobalBasis::require_admissible(const Eigen::VectorXd& delta) const {
    require_extension_domain(disc_.cyl, ShellField(shell_, delta), disc_.injectivity_margin());
}

FluidSample GlobalBasis::tabulate(const Eigen::VectorXd& delta, const Eigen::VectorXd& delta_rate) const {
    const CylinderConfig& cyl = disc_.cyl;
    const int n_shell = shell_->size();
    if (delta.size() != n_shell || delta_rate.size() != n_shell) throw BasisMismatch("geometry coefficients");
    require_admissible(delta);
    std::vector<ShellJet> djet = grid_->evaluate(delta), rjet = grid_->evaluate(delta_rate);
    FluidSample out{FluidDomain(cyl, grid_, djet, {disc_.fluid_per_panel, disc_.oversample}), {}, {}, {}, {}};
    const NodeSet& nodes = out.domain.nodes();
    const int nn = static_cast<int>(nodes.size()), n = size();
    out.table = FieldTable(nn, n);
    for (auto& m : out.rate) m = Eigen::MatrixXd::Zero(nn, n);

    std::vector<int> coupled, interior;
    for (int k = 0; k < n; ++k) (entries_[k].kind == EntryKind::Coupled ? coupled : interior).push_back(k);
    std::vector<FluxDensity> flux, flux_rate;
    std::vector<ExtensionField> ext, ext_rate;
    for (int k : coupled) {
        const Eigen::VectorXd xi = unit(n_shell, entries_[k].index);
        flux.emplace_back(*shell_, cyl.R, delta, xi);
        flux_rate.emplace_back(*shell_, 0.0, delta_rate, xi);
        ext.emplace_back(cyl, flux.back());
        ext_rate.emplace_back(cyl, flux_rate.back());
    }

    std::vector<SurfaceData> sd(coupled.size()), sd_rate(coupled.size());
    Eigen::MatrixXd q;
    int current = -1;
    for (int i = 0; i < nn; ++i) {
        const int c = out.domain.column()[i];
        const double r = nodes.r[i], theta = nodes.theta[i], z = nodes.z[i];
        if (c != current) {
            current = c;
            for (std::size_t j = 0; j < coupled.size(); ++j) {
                sd[j] = surface_data(flux[j], columns_[c], *full_);
                sd_rate[j] = surface_data(flux_rate[j], columns_[c], *full_);
            }
        }
        for (std::size_t j = 0; j < coupled.size(); ++j) {
            out.table.set(i, coupled[j], ext[j].evaluate(sd[j], r, theta, z), r);
            const CylJet rate = ext_rate[j].evaluate(sd_rate[j], r, theta, z);
            for (int d = 0; d < 3; ++d) out.rate[d](i, coupled[j]) = rate.value[d];
        }
        if (interior.empty()) continue;
        stokes_cache_->evaluate(c % grid_->n_z(), reference_radius(cyl.R, djet[c], r), q);
        for (int k : interior) {
            const PiolaJet p = piola_apply(cyl.R, djet[c], rjet[c], stokes_jet(q, entries_[k].index), r);
            out.table.set(i, k, p.field, r);
            for (int d = 0; d < 3; ++d) out.rate[d](i, k) = p.rate[d];
        }
    }

    // End disks: delta and its derivatives vanish there, so the Piola image is
    // the reference mode itself.
    out.inlet = Eigen::VectorXd::Zero(n);
    out.outlet = Eigen::VectorXd::Zero(n);
    const NodeSet* disks[2] = {&out.domain.inlet(), &out.domain.outlet()};
    const std::vector<ColumnTables>* disk_columns[2] = {&inlet_columns_, &outlet_columns_};
    for (int side = 0; side < 2; ++side) {
        const NodeSet& disk = *disks[side];
        const int per_theta = static_cast<int>(disk.size()) / grid_->n_theta();
        const double sign = side == 0 ? -1.0 : 1.0;
        Eigen::VectorXd& flux_out = side == 0 ? out.inlet : out.outlet;
        for (std::size_t j = 0; j < coupled.size(); ++j)
            for (int it = 0; it < grid_->n_theta(); ++it) {
                const SurfaceData s = surface_data(flux[j], (*disk_columns[side])[it], *full_);
                for (int p = it * per_theta; p < (it + 1) * per_theta; ++p)
                    flux_out[coupled[j]] +=
                        sign * disk.weight[p] * ext[j].evaluate(s, disk.r[p], disk.theta[p], disk.z[p]).value[2];
            }
        for (int k : interior) flux_out[k] = (side == 0 ? interior_inlet_ : interior_outlet_)[entries_[k].index];
    }
    return out;
}

CylJet GlobalBasis::fluid_mode(int k, const ShellField& delta, double r, double theta, double z) const {
    if (k < 0 || k >= size()) throw IndexOutOfRange("global entry " + std::to_string(k));
    const BasisEntry& e = entries_[k];
    if (e.kind == EntryKind::Coupled)
        return extend(disc_.cyl, delta, ShellField::unit(shell_, e.index), disc_.injectivity_margin())(r, theta, z);
    return piola(disc_.cyl, delta, stokes_->mode_field(e.index), disc_.injectivity_margin())(r, theta, z);
}

VectorField GlobalBasis::fluid_field(const Eigen::VectorXd& c, const ShellField& delta) const {
    if (c.size() != size()) throw BasisMismatch("coefficient vector has wrong length");
    Eigen::VectorXd inner = Eigen::VectorXd::Zero(disc_.n_interior);
    for (int k = 0; k < size(); ++k)
        if (entries_[k].kind == EntryKind::Interior) inner[entries_[k].index] = c[k];
    const ExtensionField ext = extend(disc_.cyl, delta, ShellField(shell_, shell_map_ * c), disc_.injectivity_margin());
    const Eigen::VectorXd cand = stokes_->coefficients() * inner;
    auto stokes = stokes_;
    VectorField reference = [stokes, cand](double r, double, double z) {
        const int nc = stokes->candidate_count();
        std::vector<double> buf(StokesBasis::kQuantities * nc);
        stokes->candidates(r, z, buf.data());
        const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> tab(
            buf.data(), StokesBasis::kQuantities, nc);
        const Eigen::MatrixXd q = tab * cand;
        return stokes_jet(q, 0);
    };
    VectorField pushed = piola(disc_.cyl, delta, std::move(reference), disc_.injectivity_margin());
    return [ext, pushed](double r, double theta, double z) { return ext(r, theta, z) + pushed(r, theta, z); };
}

TransportParts transport_parts(const GlobalBasis& basis, const FluidSample& sample, const Eigen::VectorXd& delta,
                               const Eigen::VectorXd& delta_rate) {
    const NodeSet& nodes = sample.domain.nodes();
    const Eigen::Map<const Eigen::VectorXd> w(nodes.weight.data(), static_cast<Eigen::Index>(nodes.size()));
    TransportParts out;
    out.basis_motion = weighted_gram(sample.table.value, sample.rate, w);
    const SurfaceGrid& grid = *basis.grid();
    const std::vector<ShellJet> d = grid.evaluate(delta), rate = grid.evaluate(delta_rate);
    Eigen::VectorXd ws(grid.size());
    for (int node = 0; node < grid.size(); ++node)
        ws[node] = grid.weight(node) * rate[node].value * (basis.cylinder().R + d[node].value);
    const Eigen::MatrixXd& y = basis.shell_values();
    out.boundary = y.transpose() * ws.asDiagonal() * y;
    return out;
}

SystemSample assemble_sample(const GlobalBasis& basis, const FluidSample& fluid, const Eigen::VectorXd& delta,
                             const Eigen::VectorXd& delta_rate, const Eigen::VectorXd& transport_field) {
    const NodeSet& nodes = fluid.domain.nodes();
    const Eigen::Map<const Eigen::VectorXd> w(nodes.weight.data(), static_cast<Eigen::Index>(nodes.size()));
    const FieldTable& tab = fluid.table;
    const int n = basis.size();
    SystemSample s;
    const auto symmetric = [](const Eigen::MatrixXd& m) -> Eigen::MatrixXd { return 0.5 * (m + m.transpose()); };
    s.mass = symmetric(weighted_gram(tab.value, tab.value, w) + basis.structure_mass());
    const TransportParts parts = transport_parts(basis, fluid, delta, delta_rate);
    s.transport = parts.basis_motion + 0.5 * parts.boundary;
    s.dissipation = symmetric(weighted_gram(tab.grad, tab.grad, w) + basis.solid_viscous());
    s.convection = Eigen::MatrixXd::Zero(n, n);
    if (transport_field.size() > 0) {
        if (transport_field.size() != n) throw BasisMismatch("convecting field has wrong length");
        std::array<Eigen::VectorXd, 3> v;
        for (int c = 0; c < 3; ++c) v[c] = tab.value[c] * transport_field;
        // P_kj = int X_k . (v . grad) X_j
        Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < 3; ++i) {
            Eigen::MatrixXd along = Eigen::MatrixXd::Zero(tab.nodes(), n);
            for (int l = 0; l < 3; ++l) along += v[l].asDiagonal() * tab.grad[3 * i + l];
            p.noalias() += tab.value[i].transpose() * (w.asDiagonal() * along);
        }
        s.convection = 0.5 * (p - p.transpose());
    }
    s.inlet = fluid.inlet;
    s.outlet = fluid.outlet;
    return s;
}

SystemSample assemble_sample(const GlobalBasis& basis, const Eigen::VectorXd& delta, const Eigen::VectorXd& delta_rate,
                             const Eigen::VectorXd& transport_field) {
    return assemble_sample(basis, basis.tabulate(delta, delta_rate), delta, delta_rate, transport_field);
}

AssembledSystem assemble(const GlobalBasis& basis, const CouplingPath& path, const BoundaryForcing& forcing,
                         int steps) {
    if (steps < 1) throw ValidationError("N_t >= 1");
    for (const auto* p : {&path.delta, &path.delta_rate, &path.transport})
        if (!p->empty() && static_cast<int>(p->size()) != steps) throw GridMismatch("coupling path length != N_t");
    const int n_shell = basis.shell()->size();
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n_shell);
    auto pick = [&](const std::vector<Eigen::VectorXd>& v, int m) -> const Eigen::VectorXd& {
        return v.empty() ? zero : v[m];
    };
    auto still = [&](int m) { return pick(path.delta, m).isZero(0.0) && pick(path.delta_rate, m).isZero(0.0); };
    // The undeformed geometry is tabulated once and shared.
    std::shared_ptr<const FluidSample> reference;
    for (int m = 0; m < steps && !reference; ++m)
        if (still(m)) reference = std::make_shared<FluidSample>(basis.tabulate(zero, zero));

    AssembledSystem sys;
    sys.period = forcing.period();
    sys.steps = steps;
    sys.stiffness = basis.stiffness();
    sys.forcing = forcing;
    sys.samples.resize(steps + 1);
    const Eigen::VectorXd none;
    parallel_for(steps, [&](int m) {
        const Eigen::VectorXd& v = path.transport.empty() ? none : path.transport[m];
        const Eigen::VectorXd& d = pick(path.delta, m);
        const Eigen::VectorXd& r = pick(path.delta_rate, m);
        sys.samples[m] = still(m) ? assemble_sample(basis, *reference, d, r, v) : assemble_sample(basis, d, r, v);
    });
    sys.samples[steps] = sys.samples[0];
    return sys;
}

AssembledSystem single_mode_system(double mass, double damping, double stiffness, const BoundaryForcing& forcing,
                                   int steps) {
    if (steps < 1) throw ValidationError("N_t >= 1");
    if (!(mass > 0.0) || damping < 0.0 || stiffness < 0.0) throw ValidationError("mass > 0, damping >= 0, stiffness >= 0");
    AssembledSystem sys;
    sys.period = forcing.period();
    sys.steps = steps;
    sys.stiffness = Eigen::MatrixXd::Constant(1, 1, stiffness);
    sys.forcing = forcing;
    SystemSample s;
    s.mass = Eigen::MatrixXd::Constant(1, 1, mass);
    s.transport = s.convection = Eigen::MatrixXd::Zero(1, 1);
    s.dissipation = Eigen::MatrixXd::Constant(1, 1, damping);
    s.inlet = Eigen::VectorXd::Ones(1);
    s.outlet = Eigen::VectorXd::Zero(1);
    sys.samples.assign(steps + 1, s);
    return sys;
}

double resonant_period(double mass, double stiffness, int steps) {
    if (steps < 3) throw ValidationError("N_t >= 3");
    if (!(mass > 0.0) || !(stiffness > 0.0)) throw ValidationError("mass > 0 and stiffness > 0");
    const double omega = std::sqrt(stiffness / mass);
    return steps * 2.0 * std::tan(std::numbers::pi / steps) / omega;
}

Reconstruction reconstruct(const GlobalBasis& basis, const Eigen::VectorXd& a, const Eigen::VectorXd& a_dot,
                           const ShellField& delta) {
    if (a.size() != basis.size() || a_dot.size() != basis.size()) throw BasisMismatch("state dimension");
    return {basis.fluid_field(a_dot, delta), basis.shell_field(a), basis.shell_field(a_dot), basis.solid_field(a),
            basis.solid_field(a_dot)};
}

}  // namespace perifsi
