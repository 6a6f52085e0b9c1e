#include "pend3d/dynamics.hpp"

#include <cmath>

namespace pend3d {

BodyParams::BodyParams(const Mat3& J, double m, double g, const Vec3& rho,
                       bool balanced)
    : J_(J), m_(m), g_(g), rho_(rho), balanced_(balanced) {
    if ((J - J.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw ValidationError("BodyParams: inertia matrix must be symmetric");
    }
    llt_.compute(J_);
    if (llt_.info() != Eigen::Success) {
        throw ValidationError("BodyParams: inertia matrix must be positive definite");
    }
    if (m <= 0) throw ValidationError("BodyParams: mass must be positive");
    if (g <= 0) throw ValidationError("BodyParams: gravity must be positive");
    if (!balanced && rho.norm() <= tol::kBalanced) {
        throw ValidationError(
            "BodyParams: |rho| = 0 requires the balanced flag");
    }
}

bool BodyParams::diagonal() const {
    Mat3 off = J_;
    off.diagonal().setZero();
    return off.cwiseAbs().maxCoeff() <= 1e-14 * J_.diagonal().cwiseAbs().maxCoeff();
}

LPState::LPState(const Vec3& gamma_, const Vec3& omega_)
    : gamma(gamma_), omega(omega_) {
    if (std::abs(gamma.norm() - 1.0) > tol::kUnitNorm) {
        throw NotUnit("LPState: |Gamma| != 1");
    }
}

LRState::LRState(const Vec3& gamma_, const Vec3& gammadot_, double mu_)
    : gamma(gamma_), mu(mu_) {
    if (std::abs(gamma.norm() - 1.0) > tol::kUnitNorm) {
        throw NotUnit("LRState: |Gamma| != 1");
    }
    gammadot = project_tangent_s2(gamma, gammadot_);
}

std::pair<Vec3, Mat3> rhs_full(const BodyParams& p, const FullState& s) {
    const Vec3 gamma = s.R.matrix().transpose() * Vec3::UnitZ();
    const Vec3 torque = (p.J() * s.omega).cross(s.omega) +
                        p.m() * p.g() * p.rho().cross(gamma);
    const Vec3 omegadot = p.solveJ(torque);
    const Mat3 Rdot = s.R.matrix() * hat(s.omega);
    return {omegadot, Rdot};
}

std::pair<Vec3, Vec3> rhs_lp(const BodyParams& p, const LPState& s) {
    const Vec3 torque = (p.J() * s.omega).cross(s.omega) +
                        p.m() * p.g() * p.rho().cross(s.gamma);
    return {p.solveJ(torque), s.gamma.cross(s.omega)};
}

LRAux lr_aux(const BodyParams& p, const LRState& s) {
    LRAux a;
    const Vec3 Jg = p.J() * s.gamma;
    const double gJg = s.gamma.dot(Jg);
    const Vec3 w = s.gammadot.cross(s.gamma);
    a.b = Jg.dot(w) / gJg;
    a.nu = s.mu / gJg;
    a.c = a.nu * (p.J().trace() - 2.0 * Jg.squaredNorm() / gJg);
    const Vec3 bracket = (p.J() * w - a.b * Jg).cross(w - a.b * s.gamma) +
                         a.nu * a.nu * Jg.cross(s.gamma) -
                         p.m() * p.g() * s.gamma.cross(p.rho()) -
                         a.c * s.gammadot;
    a.sigma = a.b * s.gammadot + p.solveJ(bracket);
    return a;
}

std::pair<Vec3, Vec3> rhs_lr(const BodyParams& p, const LRState& s) {
    const LRAux a = lr_aux(p, s);
    const Vec3 gammaddot = -s.gammadot.squaredNorm() * s.gamma +
                           s.gamma.cross(a.sigma);
    return {s.gammadot, gammaddot};
}

void require_axisymmetric(const BodyParams& p) {
    const Mat3& J = p.J();
    const Vec3& rho = p.rho();
    Mat3 off = J;
    off.diagonal().setZero();
    const bool ok = off.cwiseAbs().maxCoeff() <= tol::kAxisymmetry &&
                    std::abs(J(0, 0) - J(1, 1)) <= tol::kAxisymmetry &&
                    std::abs(rho.x()) <= tol::kAxisymmetry &&
                    std::abs(rho.y()) <= tol::kAxisymmetry &&
                    rho.z() > 0;
    if (!ok) {
        throw NotAxisymmetric(
            "special case requires J = diag(Jt, Jt, Ja) and rho = rho_s e3");
    }
}

std::pair<Vec3, Eigen::Vector2d> rhs_top(const BodyParams& p, double c,
                                         const Vec3& gamma,
                                         const Eigen::Vector2d& omega_xy) {
    require_axisymmetric(p);
    const double Jt = p.J()(0, 0), Ja = p.J()(2, 2);
    const double mgr = p.m() * p.g() * p.rho().z();
    Eigen::Vector2d wdot;
    wdot.x() = (c * (Jt - Ja) * omega_xy.y() - mgr * gamma.y()) / Jt;
    wdot.y() = (c * (Ja - Jt) * omega_xy.x() + mgr * gamma.x()) / Jt;
    const Vec3 omega(omega_xy.x(), omega_xy.y(), c);
    return {gamma.cross(omega), wdot};
}

std::pair<Vec3, Eigen::Vector2d> rhs_spherical(const BodyParams& p,
                                               const Vec3& gamma,
                                               const Eigen::Vector2d& omega_xy) {
    require_axisymmetric(p);
    const double Jt = p.J()(0, 0);
    const double mgr = p.m() * p.g() * p.rho().z();
    Eigen::Vector2d wdot(-mgr * gamma.y() / Jt, mgr * gamma.x() / Jt);
    const Vec3 omega(omega_xy.x(), omega_xy.y(), 0.0);
    return {gamma.cross(omega), wdot};
}

Eigen::Vector2d rhs_planar(const BodyParams& p, double theta, double omega_y) {
    require_axisymmetric(p);
    const double Jt = p.J()(0, 0);
    const double mgr = p.m() * p.g() * p.rho().z();
    return {omega_y, -mgr * std::sin(theta) / Jt};
}

} // namespace pend3d
