#pragma once

#include <utility>

#include <Eigen/Dense>

#include "pend3d/geometry.hpp"

namespace pend3d {

/// Physical parameters of the pendulum body. The inertia factorization is
/// computed once at construction; instances are immutable and shareable.
class BodyParams {
public:
    /// J must be symmetric positive definite; rho may be zero only when
    /// `balanced` is set.
    BodyParams(const Mat3& J, double m, double g, const Vec3& rho,
               bool balanced = false);

    const Mat3& J() const { return J_; }
    double m() const { return m_; }
    double g() const { return g_; }
    const Vec3& rho() const { return rho_; }
    bool balanced() const { return balanced_; }

    Vec3 solveJ(const Vec3& b) const { return llt_.solve(b); }
    Mat3 Jinv() const { return llt_.solve(Mat3::Identity()); }

    bool diagonal() const;

private:
    Mat3 J_;
    double m_, g_;
    Vec3 rho_;
    bool balanced_;
    Eigen::LLT<Mat3> llt_;
};

/// Point of TSO(3): attitude and body angular velocity.
struct FullState {
    Rotation R;
    Vec3 omega = Vec3::Zero();
};

/// Point of TSO(3)/S^1: reduced attitude (unit) and body angular velocity.
struct LPState {
    Vec3 gamma = Vec3::UnitZ();
    Vec3 omega = Vec3::Zero();

    LPState() = default;
    LPState(const Vec3& gamma_, const Vec3& omega_);
};

/// Point of TS^2 on a momentum level set.
struct LRState {
    Vec3 gamma = Vec3::UnitZ();
    Vec3 gammadot = Vec3::Zero();
    double mu = 0.0;

    LRState() = default;
    /// Projects any gammadot component along gamma out at construction.
    LRState(const Vec3& gamma_, const Vec3& gammadot_, double mu_);
};

/// Scalars b, nu, c and the vector Sigma entering the reduced equation on
/// TS^2. Recomputed from the state, never stored across steps.
struct LRAux {
    double b = 0.0;
    double nu = 0.0;
    double c = 0.0;
    Vec3 sigma = Vec3::Zero();
};

/// omegadot = J^-1 (J w x w + mg rho x R^T e3), Rdot = R hat(w).
std::pair<Vec3, Mat3> rhs_full(const BodyParams& p, const FullState& s);

/// omegadot = J^-1 (J w x w + mg rho x Gamma), Gammadot = Gamma x w.
std::pair<Vec3, Vec3> rhs_lp(const BodyParams& p, const LPState& s);

LRAux lr_aux(const BodyParams& p, const LRState& s);

/// Gammaddot = -|Gammadot|^2 Gamma + Gamma x Sigma.
std::pair<Vec3, Vec3> rhs_lr(const BodyParams& p, const LRState& s);

/// Throws NotAxisymmetric unless J = diag(Jt, Jt, Ja) and rho = rho_s e3.
void require_axisymmetric(const BodyParams& p);

/// Spinning top: omega_z held at the spin rate c.
/// State (Gamma, omega_x, omega_y) -> (Gammadot, omegadot_x, omegadot_y).
std::pair<Vec3, Eigen::Vector2d> rhs_top(const BodyParams& p, double c,
                                         const Vec3& gamma,
                                         const Eigen::Vector2d& omega_xy);

/// 2D spherical pendulum (zero spin rate).
std::pair<Vec3, Eigen::Vector2d> rhs_spherical(const BodyParams& p,
                                               const Vec3& gamma,
                                               const Eigen::Vector2d& omega_xy);

/// 1D planar pendulum: (theta, omega_y) -> (thetadot, omegadot_y).
Eigen::Vector2d rhs_planar(const BodyParams& p, double theta, double omega_y);

} // namespace pend3d
