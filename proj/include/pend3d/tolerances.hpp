#pragma once

// Central tolerance record. Tests and modules both read from here so a
// change in one place cannot silently split the contract.

namespace pend3d::tol {

inline constexpr double kOrthonormality = 1e-10;   // |R^T R - I|_inf after construction
inline constexpr double kDeterminant = 1e-10;      // |det(R) - 1|
inline constexpr double kSkewResidual = 1e-9;      // antisymmetry residual accepted by vee
inline constexpr double kSmallAngle = 1e-8;        // series switch in exp_so3
inline constexpr double kRenormalizeBall = 0.1;    // |R^T R - I|_inf accepted by renormalize
inline constexpr double kUnitNorm = 1e-9;          // |Gamma| deviation from 1
inline constexpr double kTangency = 1e-9;          // Gamma . Gammadot
inline constexpr double kAxisymmetry = 1e-12;      // J/rho deviation accepted by the special cases
inline constexpr double kAlphaGuard = 1e-9;        // relative guard around poles of n_alpha
inline constexpr double kEquilibriumResidual = 1e-10;
inline constexpr double kDegeneracy = 1e-12;       // rho_i = 0 and J_i = J_j equality tests
inline constexpr double kBalanced = 1e-12;         // |rho| below which the body is balanced
inline constexpr double kStateBlowup = 1e6;
inline constexpr double kCrossing = 1e-10;         // Poincare crossing refinement
inline constexpr double kPoleExclusion = 1e-6;     // section excluded near Gamma = +-e3
inline constexpr double kLiftMatch = 1e-8;         // Pi(R0) vs Gamma(0) in reconstruction
inline constexpr double kVerticalRotation = 1e-6;  // R(T)R(0)^T about e3 check
inline constexpr double kLoopClosure = 1e-8;

} // namespace pend3d::tol
