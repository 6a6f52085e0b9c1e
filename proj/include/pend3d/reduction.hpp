#pragma once

#include <vector>

#include "pend3d/dynamics.hpp"

namespace pend3d {

/// Sampled reduced curve on a momentum level set, uniform time grid.
struct ReducedTrajectory {
    std::vector<double> t;
    std::vector<Vec3> gamma;
    std::vector<Vec3> gammadot;
    double mu = 0.0;
};

struct ReconstructedTrajectory {
    std::vector<double> t;
    std::vector<Mat3> R;
    std::vector<Mat3> R_hor;
    std::vector<Vec3> omega;
    std::vector<double> theta_dyn;
};

enum class Quadrature { Trapezoid, Simpson };

/// pi(R, w) = (R^T e3, w).
LPState project(const FullState& s);

/// Horizontal velocity: Gammadot x Gamma - b Gamma; annihilated by the
/// mechanical connection.
Vec3 omega_hor(const BodyParams& p, const Vec3& gamma, const Vec3& gammadot);

/// A rotation whose projection is gamma (third row = gamma^T), deterministic.
Rotation frame_over(const Vec3& gamma);

/// Horizontal lift + dynamic phase + reassembly. Throws InitialMismatch if
/// Pi(R0) != Gamma(0).
ReconstructedTrajectory reconstruct(const BodyParams& p,
                                    const ReducedTrajectory& traj,
                                    const Rotation& R0,
                                    Quadrature quad = Quadrature::Trapezoid);

/// Surface-integral geometric phase over the region bounded by the loop on
/// the side of its centroid. Throws NotClosed.
double geometric_phase_surface(const BodyParams& p,
                               const std::vector<Vec3>& loop);

struct PhaseResult {
    double wrapped = 0.0; // in (-pi, pi]
    int winding = 0;
    double total() const;
};

/// Reconstruction-based geometric phase (mu = 0): lifts the loop, extracts
/// the vertical rotation R(T) R(0)^T, and books windings from the lift.
PhaseResult geometric_phase_reconstruct(const BodyParams& p,
                                        const ReducedTrajectory& loop);

} // namespace pend3d
