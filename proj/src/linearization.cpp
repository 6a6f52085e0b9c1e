#include "pend3d/linearization.hpp"

#include <cmath>

#include "pend3d/conservation.hpp"

namespace pend3d {

Mat3 stiffness_matrix(const BodyParams& p) {
    if (p.rho().norm() < tol::kBalanced) {
        throw BalancedBody("stiffness_matrix: rho = 0 has no gravity stiffness");
    }
    const Mat3 rh = hat(p.rho());
    return -(p.m() * p.g() / p.rho().norm()) * (rh * rh);
}

Diagonalization simultaneous_diagonalize(const BodyParams& p) {
    const Mat3 K = stiffness_matrix(p);
    const Mat3 L = Eigen::LLT<Mat3>(p.J()).matrixL();
    const Mat3 B = L.inverse() * K * L.transpose().inverse();
    Eigen::SelfAdjointEigenSolver<Mat3> es(B);

    // descending eigenvalue order, then lexicographic sign fixing
    Mat3 Q;
    Vec3 lambda;
    for (int i = 0; i < 3; ++i) {
        lambda(i) = es.eigenvalues()(2 - i);
        Vec3 q = es.eigenvectors().col(2 - i);
        for (int j = 0; j < 3; ++j) {
            if (std::abs(q(j)) > 1e-12) {
                if (q(j) < 0) q = -q;
                break;
            }
        }
        Q.col(i) = q;
    }
    Diagonalization d;
    d.M = L * Q;
    d.lambda = lambda;
    return d;
}

namespace {

bool hanging_energy_certificate(const BodyParams& p) {
    // strict minimum of the reduced energy at (rho/|rho|, 0) over a
    // deterministic sample of nearby states
    const Vec3 gh = p.rho().normalized();
    const double v0 = p.m() * p.g() * p.rho().norm();
    const auto [t1, t2] = tangent_basis(gh);
    for (int i = 0; i < 16; ++i) {
        const double phi = 2.0 * M_PI * i / 16.0;
        const Vec3 dg = 1e-3 * (std::cos(phi) * t1 + std::sin(phi) * t2);
        const Vec3 gamma = (gh + dg).normalized();
        for (const Vec3& w :
             {Vec3::Zero().eval(), (1e-3 * t1).eval(), (1e-3 * gh).eval()}) {
            const double v = energy_lp(p, LPState(gamma, w)) + v0;
            if (!(v > 0) && !(gamma.isApprox(gh) && w.isZero())) return false;
        }
    }
    return true;
}

} // namespace

LinearModel linearize(const BodyParams& p, EquilibriumSide side, ModelTag model) {
    const Diagonalization d = simultaneous_diagonalize(p);
    const double sgn = side == EquilibriumSide::Hanging ? -1.0 : 1.0;

    LinearModel lm;
    lm.model = model;
    lm.side = side;
    switch (model) {
        case ModelTag::Full: {
            // (dTheta, domega); J dThetaddot = sgn * K dTheta
            const Mat3 K = stiffness_matrix(p);
            Eigen::MatrixXd A = Eigen::MatrixXd::Zero(6, 6);
            A.block<3, 3>(0, 3).setIdentity();
            A.block<3, 3>(3, 0) = sgn * p.Jinv() * K;
            lm.A = A;
            break;
        }
        case ModelTag::LP: {
            // (x1, x2, v1, v2, v3)
            Eigen::MatrixXd A = Eigen::MatrixXd::Zero(5, 5);
            A(0, 2) = 1.0;
            A(1, 3) = 1.0;
            A(2, 0) = sgn * d.lambda(0);
            A(3, 1) = sgn * d.lambda(1);
            lm.A = A;
            break;
        }
        case ModelTag::LR: {
            Eigen::MatrixXd A = Eigen::MatrixXd::Zero(4, 4);
            A(0, 2) = 1.0;
            A(1, 3) = 1.0;
            A(2, 0) = sgn * d.lambda(0);
            A(3, 1) = sgn * d.lambda(1);
            lm.A = A;
            break;
        }
    }

    Eigen::EigenSolver<Eigen::MatrixXd> es(lm.A);
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        lm.eigenvalues.push_back(es.eigenvalues()(i));
    }
    std::sort(lm.eigenvalues.begin(), lm.eigenvalues.end(),
              [](const auto& a, const auto& b) {
                  return a.real() != b.real() ? a.real() < b.real()
                                              : a.imag() < b.imag();
              });

    double max_re = 0.0;
    for (const auto& ev : lm.eigenvalues) max_re = std::max(max_re, ev.real());
    if (max_re > 1e-8) {
        lm.verdict = StabilityVerdict::Unstable;
    } else if (side == EquilibriumSide::Hanging && hanging_energy_certificate(p)) {
        lm.verdict = StabilityVerdict::LyapunovStableCandidate;
    } else {
        lm.verdict = StabilityVerdict::Inconclusive;
    }
    return lm;
}

std::pair<Vec3, Vec3> tangent_basis(const Vec3& gamma) {
    int k = 0;
    for (int i = 1; i < 3; ++i) {
        if (std::abs(gamma(i)) < std::abs(gamma(k))) k = i;
    }
    const Vec3 t1 = Vec3::Unit(k).cross(gamma).normalized();
    return {t1, gamma.cross(t1)};
}

namespace {

void validate_fd(double residual, double h) {
    if (residual > tol::kEquilibriumResidual) {
        throw NotAnEquilibrium("fd_jacobian: state is not an equilibrium");
    }
    if (h < 1e-7 || h > 1e-4) {
        throw Error("fd_jacobian: step size outside [1e-7, 1e-4]");
    }
}

} // namespace

Eigen::MatrixXd fd_jacobian_full(const BodyParams& p, const FullState& s,
                                 double h) {
    validate_fd(rhs_full(p, s).first.norm() + s.omega.norm(), h);
    const Mat3 Re = s.R.matrix();
    // chart (theta, w) -> R = Re exp(hat(theta)), omega = w; at a rest
    // equilibrium the chart velocity is theta_dot = w to first order
    auto f = [&](const Eigen::Matrix<double, 6, 1>& z) {
        const Vec3 theta = z.head<3>(), w = z.tail<3>();
        FullState st{Rotation(Re * exp_so3(theta).matrix()), w};
        Eigen::Matrix<double, 6, 1> out;
        out.head<3>() = w;
        out.tail<3>() = rhs_full(p, st).first;
        return out;
    };
    Eigen::MatrixXd J(6, 6);
    for (int j = 0; j < 6; ++j) {
        Eigen::Matrix<double, 6, 1> zp = Eigen::Matrix<double, 6, 1>::Zero();
        zp(j) = h;
        J.col(j) = (f(zp) - f(-zp)) / (2.0 * h);
    }
    return J;
}

Eigen::MatrixXd fd_jacobian_lp(const BodyParams& p, const LPState& s, double h) {
    auto [wd, gd] = rhs_lp(p, s);
    validate_fd(wd.norm() + gd.norm() + s.omega.norm(), h);
    const auto [t1, t2] = tangent_basis(s.gamma);
    auto f = [&](const Eigen::Matrix<double, 5, 1>& z) {
        const Vec3 gamma = (s.gamma + z(0) * t1 + z(1) * t2).normalized();
        LPState st(gamma, z.tail<3>());
        auto [wdot, gdot] = rhs_lp(p, st);
        Eigen::Matrix<double, 5, 1> out;
        out(0) = t1.dot(gdot);
        out(1) = t2.dot(gdot);
        out.tail<3>() = wdot;
        return out;
    };
    Eigen::MatrixXd J(5, 5);
    for (int j = 0; j < 5; ++j) {
        Eigen::Matrix<double, 5, 1> zp = Eigen::Matrix<double, 5, 1>::Zero();
        zp(j) = h;
        J.col(j) = (f(zp) - f(-zp)) / (2.0 * h);
    }
    return J;
}

Eigen::MatrixXd fd_jacobian_lr(const BodyParams& p, const LRState& s, double h) {
    auto [gd, gdd] = rhs_lr(p, s);
    validate_fd(gdd.norm() + gd.norm(), h);
    const auto [t1, t2] = tangent_basis(s.gamma);
    auto f = [&](const Eigen::Matrix<double, 4, 1>& z) {
        const Vec3 gamma = (s.gamma + z(0) * t1 + z(1) * t2).normalized();
        const Vec3 gdot = z(2) * t1 + z(3) * t2;
        LRState st(gamma, gdot, s.mu);
        auto [gdot2, gddot] = rhs_lr(p, st);
        Eigen::Matrix<double, 4, 1> out;
        out(0) = t1.dot(gdot2);
        out(1) = t2.dot(gdot2);
        out(2) = t1.dot(gddot);
        out(3) = t2.dot(gddot);
        return out;
    };
    Eigen::MatrixXd J(4, 4);
    for (int j = 0; j < 4; ++j) {
        Eigen::Matrix<double, 4, 1> zp = Eigen::Matrix<double, 4, 1>::Zero();
        zp(j) = h;
        J.col(j) = (f(zp) - f(-zp)) / (2.0 * h);
    }
    return J;
}

} // namespace pend3d
