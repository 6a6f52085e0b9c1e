#pragma once

#include "pend3d/dynamics.hpp"

namespace pend3d {

/// E = 1/2 w^T J w - mg rho^T R^T e3.
double energy_full(const BodyParams& p, const FullState& s);

/// h = w^T J R^T e3, the vertical angular momentum component.
double momentum_h(const BodyParams& p, const FullState& s);

/// E on the quotient: 1/2 w^T J w - mg rho^T Gamma.
double energy_lp(const BodyParams& p, const LPState& s);

/// Momentum map of the vertical S^1 action, e3^T R J w. Pointwise equal to
/// momentum_h.
double momentum_map(const BodyParams& p, const FullState& s);

/// Locked inertia about the vertical axis, e3^T R J R^T e3.
double locked_inertia(const BodyParams& p, const Rotation& R);

/// Mechanical connection: momentum map over locked inertia.
double mechanical_connection(const BodyParams& p, const FullState& s);

/// Routhian on the momentum level set mu.
double routhian(const BodyParams& p, const LRState& s);

/// Magnetic two-form evaluated on (Gamma x eta, Gamma x zeta).
double magnetic_form(const BodyParams& p, const Vec3& gamma, const Vec3& eta,
                     const Vec3& zeta, double mu);

/// Energy in the TS^2 variables; agrees with energy_full of the
/// reconstructed state on the level set.
double energy_lr(const BodyParams& p, const LRState& s);

} // namespace pend3d
