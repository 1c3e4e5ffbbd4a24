#include "perifsi/piola.hpp"

#include "perifsi/dual.hpp"
#include "perifsi/errors.hpp"

namespace perifsi {

PiolaJet piola_apply(double R, const ShellJet& delta, const ShellJet& delta_rate, const CylJet& ref, double r) {
    using D = Dual<4>;  // directions: r, theta, z, t
    const D lam(1.0 + delta.value / R, {0.0, delta.d_theta / R, delta.d_z / R, delta_rate.value / R});
    const D lam_t(delta.d_theta / R, {0.0, delta.d_tt / R, delta.d_tz / R, delta_rate.d_theta / R});
    const D lam_z(delta.d_z / R, {0.0, delta.d_tz / R, delta.d_zz / R, delta_rate.d_z / R});
    const D rhat = D::variable(r, 0) / lam;

    std::array<D, 3> phi;
    for (int c = 0; c < 3; ++c) {
        phi[c].v = ref.value[c];
        for (int k = 0; k < 4; ++k) phi[c].d[k] = ref.partial(c, 0) * rhat.d[k];
        phi[c].d[1] += ref.partial(c, 1);
        phi[c].d[2] += ref.partial(c, 2);
    }
    const D lam2 = lam * lam;
    const std::array<D, 3> v{phi[0] / lam + (lam_t * phi[1] + rhat * lam_z * phi[2]) / lam2, phi[1] / lam,
                             phi[2] / lam2};
    PiolaJet out;
    for (int c = 0; c < 3; ++c) {
        out.field.value[c] = v[c].v;
        for (int k = 0; k < 3; ++k) out.field.partial(c, k) = v[c].d[k];
        out.rate[c] = v[c].d[3];
    }
    return out;
}

VectorField piola(const CylinderConfig& cyl, const ShellField& eta, VectorField reference, double margin) {
    if (!check_injectivity(cyl, eta, margin)) throw DomainViolation("piola: displacement breaks injectivity");
    return [R = cyl.R, eta, reference = std::move(reference)](double r, double theta, double z) {
        const ShellJet d = eta(theta, z);
        const CylJet ref = reference(reference_radius(R, d, r), theta, z);
        return piola_apply(R, d, ShellJet{}, ref, r).field;
    };
}

VectorField piola(const CylinderConfig& cyl, const ShellField& eta, VectorField reference) {
    return piola(cyl, eta, std::move(reference), cyl.default_margin());
}

}  // namespace perifsi
