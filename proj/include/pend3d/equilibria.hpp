#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pend3d/dynamics.hpp"

namespace pend3d {

enum class EquilibriumFamily {
    Hanging,
    Inverted,
    InvInertiaAxis,
    AlphaFamily,
    DegenerateDistinct,
    DegenerateAxisym,
};

std::string family_name(EquilibriumFamily f);

/// A reduced-model equilibrium in both the (Gamma_e, omega_e) and mu forms.
struct Equilibrium {
    Vec3 gamma_e = Vec3::UnitZ();
    Vec3 omega_e = Vec3::Zero();
    double mu = 0.0;
    EquilibriumFamily family = EquilibriumFamily::Hanging;
    double alpha = 0.0;   // family parameter (alpha, or gamma for degenerate)
    double delta = 0.0;   // second parameter of the axisymmetric 2D family
    int interval = 0;     // L1..L4 for the alpha family, axis index i for
                          // the degenerate-distinct family, 0 otherwise
    double residual = 0.0;
};

/// Grid controls for the parameterized families.
struct EquilibriaGrid {
    int alpha_samples_per_interval = 100; // log-spaced, clamped off the poles
    double alpha_min_abs = 1e-6;
    double alpha_max_abs = 1e6;
    double pole_clamp = 1e-3;             // relative offset from 1/J_i
    int gamma_samples = 21;               // uniform grid for degenerate cases
    double gamma_range = 5.0;             // [-range, range]
};

/// n_alpha = (J - I/alpha)^-1 rho. Throws SingularAlpha within the relative
/// guard of {0, 1/J1, 1/J2, 1/J3}.
Vec3 n_alpha(const BodyParams& p, double alpha);

/// Residual of the reduced equilibrium condition,
/// |J w_e x w_e + mg rho x Gamma_e| + |Gamma_e x w_e|.
double check_equilibrium(const BodyParams& p, const Equilibrium& e);

/// All equilibria of the reduced model per the classification: hanging,
/// inverted, the two J^-1 rho relative equilibria, the alpha family sampled
/// over L1..L4 (both angular velocity signs), and the degenerate families
/// when the inertia/rho conditions hold. Requires diagonal J with
/// J1 >= J2 >= J3. Output is deterministically ordered.
std::vector<Equilibrium> enumerate_lp(const BodyParams& p,
                                      const EquilibriaGrid& grid = {});

/// Same attitudes as enumerate_lp with the momentum value
/// mu = k (Gamma_e^T J Gamma_e), k from omega_e = k Gamma_e.
std::vector<Equilibrium> enumerate_lr(const BodyParams& p,
                                      const EquilibriaGrid& grid = {});

} // namespace pend3d
