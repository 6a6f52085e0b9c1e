#pragma once

#include <tuple>
#include <vector>

#include "pend3d/conservation.hpp"
#include "pend3d/dynamics.hpp"

namespace pend3d {

enum class Method { Rk4Projected, LieGroupRk2, LieGroupRk4 };

struct IntegratorConfig {
    Method method = Method::LieGroupRk4;
    double h = 1e-3;
    double T = 10.0;
    int renormalize_every = 1;
};

struct PoincareSection {
    double E = 0.0;
    double mu = 0.0;
    double crossing_tolerance = 1e-10;
    int max_crossings = 2000;
};

struct PoincarePoint {
    Vec3 gamma = Vec3::UnitZ();
    double t = 0.0;
    double u = 0.0, v = 0.0; // chart (Gamma_1, Gamma_2)
    int sign_gamma3 = 1;
    double energy_error = 0.0;
    double g_residual = 0.0;
};

struct FullSample {
    double t;
    Mat3 R;
    Vec3 omega;
    double E;
    double h_momentum;
};

struct LPSample {
    double t;
    Vec3 gamma, omega;
    double E, h_momentum;
};

struct LRSample {
    double t;
    Vec3 gamma, gammadot;
    double E, mu;
};

/// Single fixed steps. Lie-group methods update R through the exponential
/// map and stay on SO(3); Rk4Projected treats R as nine numbers and leaves
/// renormalization to the trajectory driver. Throws StepBlowup past 1e6.
std::pair<Mat3, Vec3> step_full(const BodyParams& p, const Mat3& R,
                                const Vec3& omega, Method method, double h);
LPState step_lp(const BodyParams& p, const LPState& s, Method method, double h);
LRState step_lr(const BodyParams& p, const LRState& s, Method method, double h);

std::vector<FullSample> integrate_full(const BodyParams& p, const FullState& s0,
                                       const IntegratorConfig& cfg);
std::vector<LPSample> integrate_lp(const BodyParams& p, const LPState& s0,
                                   const IntegratorConfig& cfg);
std::vector<LRSample> integrate_lr(const BodyParams& p, const LRState& s0,
                                   const IntegratorConfig& cfg);

/// Crossings of e3^T Gammadot = 0 with e3^T (Gamma x Gammadot) > 0 on the
/// energy shell, refined by bisection; attitudes near +-e3 are excluded.
std::vector<PoincarePoint> poincare_map(const BodyParams& p, const LRState& s0,
                                        const PoincareSection& section,
                                        const IntegratorConfig& cfg);

/// Consistent triple over the three models from full-model initial data.
std::tuple<FullState, LPState, LRState> build_initial(const BodyParams& p,
                                                      const Rotation& R0,
                                                      const Vec3& omega0);

} // namespace pend3d
