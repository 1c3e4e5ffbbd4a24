#include "perifsi/fluid_domain.hpp"

#include "perifsi/errors.hpp"

namespace perifsi {

FluidDomain::FluidDomain(const CylinderConfig& cyl, const ShellField& delta, FluidQuadratureSpec spec)
    : cyl_(cyl), spec_(spec) {
    grid_ = std::make_shared<SurfaceGrid>(SurfaceGrid::standard(delta.basis_ptr(), spec.oversample));
    delta_ = grid_->evaluate(delta.coefficients());
    build();
}

FluidDomain::FluidDomain(const CylinderConfig& cyl, std::shared_ptr<const SurfaceGrid> grid, std::vector<ShellJet> delta,
                         FluidQuadratureSpec spec)
    : cyl_(cyl), grid_(std::move(grid)), delta_(std::move(delta)), spec_(spec) {
    if (static_cast<int>(delta_.size()) != grid_->size()) throw GridMismatch("delta samples vs surface grid");
    build();
}

void FluidDomain::build() {
    const double R = cyl_.R;
    const int n = spec_.per_panel;
    const auto inner = composite_gauss(n, {0.0, 0.25 * R, 0.5 * R});
    for (int node = 0; node < grid_->size(); ++node) {
        const double top = R + delta_[node].value;
        if (!(top > 0.5 * R)) throw DomainViolation("interface enters the inner cylinder");
        const double theta = grid_->theta().nodes[node / grid_->n_z()];
        const double z = grid_->z().nodes[node % grid_->n_z()];
        const double w = grid_->weight(node);
        const auto outer = gauss_legendre(n, 0.5 * R, top);
        for (const auto* rule : {&inner, &outer})
            for (std::size_t i = 0; i < rule->size(); ++i) {
                nodes_.push(rule->nodes[i], theta, z, w * rule->weights[i] * rule->nodes[i]);
                column_.push_back(node);
            }
    }
    // End disks: delta vanishes at z = 0, L so both have radius R.
    const auto disk = composite_gauss(n, {0.0, 0.25 * R, 0.5 * R, R});
    const auto& tr = grid_->theta();
    for (std::size_t j = 0; j < tr.size(); ++j)
        for (std::size_t i = 0; i < disk.size(); ++i) {
            const double w = tr.weights[j] * disk.weights[i] * disk.nodes[i];
            inlet_.push(disk.nodes[i], tr.nodes[j], 0.0, w);
            outlet_.push(disk.nodes[i], tr.nodes[j], cyl_.L, w);
        }
}

double trilinear_b(const FluidDomain& domain, const VectorField& u, const VectorField& v, const VectorField& w) {
    const NodeSet& q = domain.nodes();
    double sum = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double r = q.r[i];
        const CylJet fu = u(r, q.theta[i], q.z[i]), fv = v(r, q.theta[i], q.z[i]), fw = w(r, q.theta[i], q.z[i]);
        const Eigen::Vector3d gv_u = local_gradient(fv, r) * fu.value;
        const Eigen::Vector3d gw_u = local_gradient(fw, r) * fu.value;
        sum += q.weight[i] * 0.5 * (gv_u.dot(fw.value) - gw_u.dot(fv.value));
    }
    return sum;
}

double boundary_load(const FluidDomain& domain, const VectorField& q, double p_in, double p_out) {
    if (p_in == 0.0 && p_out == 0.0) return 0.0;
    double in = 0.0, out = 0.0;
    const NodeSet& a = domain.inlet();
    for (std::size_t i = 0; i < a.size(); ++i) in -= a.weight[i] * q(a.r[i], a.theta[i], a.z[i]).value[2];
    const NodeSet& b = domain.outlet();
    for (std::size_t i = 0; i < b.size(); ++i) out += b.weight[i] * q(b.r[i], b.theta[i], b.z[i]).value[2];
    return p_in * in - p_out * out;
}

double dirichlet_form(const FluidDomain& domain, const VectorField& u, const VectorField& q) {
    const NodeSet& n = domain.nodes();
    double sum = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double r = n.r[i];
        sum += n.weight[i] * local_gradient(u(r, n.theta[i], n.z[i]), r)
                                 .cwiseProduct(local_gradient(q(r, n.theta[i], n.z[i]), r))
                                 .sum();
    }
    return sum;
}

double symmetric_gradient_form(const FluidDomain& domain, const VectorField& u, const VectorField& q) {
    const NodeSet& n = domain.nodes();
    double sum = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double r = n.r[i];
        const Eigen::Matrix3d gu = local_gradient(u(r, n.theta[i], n.z[i]), r);
        const Eigen::Matrix3d gq = local_gradient(q(r, n.theta[i], n.z[i]), r);
        const Eigen::Matrix3d du = 0.5 * (gu + gu.transpose()), dq = 0.5 * (gq + gq.transpose());
        sum += n.weight[i] * 2.0 * du.cwiseProduct(dq).sum();
    }
    return sum;
}

}  // namespace perifsi
