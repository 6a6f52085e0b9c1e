#include "pend3d/conservation.hpp"

namespace pend3d {

double energy_full(const BodyParams& p, const FullState& s) {
    const Vec3 gamma = s.R.matrix().transpose() * Vec3::UnitZ();
    return 0.5 * s.omega.dot(p.J() * s.omega) -
           p.m() * p.g() * p.rho().dot(gamma);
}

double momentum_h(const BodyParams& p, const FullState& s) {
    const Vec3 gamma = s.R.matrix().transpose() * Vec3::UnitZ();
    return s.omega.dot(p.J() * gamma);
}

double energy_lp(const BodyParams& p, const LPState& s) {
    return 0.5 * s.omega.dot(p.J() * s.omega) -
           p.m() * p.g() * p.rho().dot(s.gamma);
}

double momentum_map(const BodyParams& p, const FullState& s) {
    return Vec3::UnitZ().dot(s.R.matrix() * (p.J() * s.omega));
}

double locked_inertia(const BodyParams& p, const Rotation& R) {
    const Vec3 gamma = R.matrix().transpose() * Vec3::UnitZ();
    return gamma.dot(p.J() * gamma);
}

double mechanical_connection(const BodyParams& p, const FullState& s) {
    return momentum_map(p, s) / locked_inertia(p, s.R);
}

double routhian(const BodyParams& p, const LRState& s) {
    const LRAux a = lr_aux(p, s);
    const Vec3 w = s.gammadot.cross(s.gamma);
    const double gJg = s.gamma.dot(p.J() * s.gamma);
    return 0.5 * w.dot(p.J() * w) -
           0.5 * (a.b * a.b + a.nu * a.nu) * gJg +
           p.m() * p.g() * s.gamma.dot(p.rho());
}

double magnetic_form(const BodyParams& p, const Vec3& gamma, const Vec3& eta,
                     const Vec3& zeta, double mu) {
    const Vec3 Jg = p.J() * gamma;
    const double gJg = gamma.dot(Jg);
    const double bracket = -gJg * p.J().trace() + 2.0 * Jg.squaredNorm();
    return -mu / (gJg * gJg) * bracket * gamma.dot(eta.cross(zeta));
}

double energy_lr(const BodyParams& p, const LRState& s) {
    const LRAux a = lr_aux(p, s);
    const Vec3 w = s.gammadot.cross(s.gamma) + (a.nu - a.b) * s.gamma;
    return 0.5 * w.dot(p.J() * w) - p.m() * p.g() * p.rho().dot(s.gamma);
}

} // namespace pend3d
