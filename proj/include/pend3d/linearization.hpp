#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "pend3d/dynamics.hpp"

namespace pend3d {

enum class ModelTag { Full, LP, LR };
enum class EquilibriumSide { Hanging, Inverted };
enum class StabilityVerdict { LyapunovStableCandidate, Unstable, Inconclusive };

/// M with J = M M^T and stiffness = M Lambda M^T, Lambda sorted descending
/// with its third entry zero.
struct Diagonalization {
    Mat3 M;
    Vec3 lambda; // diag(mgl1, mgl2, 0), mgl1 >= mgl2 > 0
};

struct LinearModel {
    ModelTag model = ModelTag::Full;
    EquilibriumSide side = EquilibriumSide::Hanging;
    Eigen::MatrixXd A;                        // 6x6 / 5x5 / 4x4
    std::vector<std::complex<double>> eigenvalues;
    StabilityVerdict verdict = StabilityVerdict::Inconclusive;
};

/// Stiffness matrix -mg rho_hat^2 / |rho| of the hanging linearization.
Mat3 stiffness_matrix(const BodyParams& p);

/// Simultaneous congruence diagonalization of (J, stiffness).
/// Throws BalancedBody when |rho| vanishes.
Diagonalization simultaneous_diagonalize(const BodyParams& p);

/// Linearized model at the hanging or inverted equilibrium, with
/// eigenstructure and a stability verdict. The hanging verdict is upgraded
/// from Inconclusive to LyapunovStableCandidate by an energy certificate
/// (strict minimum of the reduced energy over sampled perturbations).
LinearModel linearize(const BodyParams& p, EquilibriumSide side, ModelTag model);

/// Central-difference Jacobians of the corresponding rhs in a local chart
/// (exponential / tangent-plane on attitude, linear on velocity).
/// Throws NotAnEquilibrium when the state is not at rest within tolerance.
Eigen::MatrixXd fd_jacobian_full(const BodyParams& p, const FullState& s, double h);
Eigen::MatrixXd fd_jacobian_lp(const BodyParams& p, const LPState& s, double h);
Eigen::MatrixXd fd_jacobian_lr(const BodyParams& p, const LRState& s, double h);

/// Orthonormal tangent basis at a point of S^2, deterministic in the input.
std::pair<Vec3, Vec3> tangent_basis(const Vec3& gamma);

} // namespace pend3d
