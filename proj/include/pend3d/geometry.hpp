#pragma once

#include <Eigen/Dense>

#include "pend3d/errors.hpp"
#include "pend3d/tolerances.hpp"

namespace pend3d {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// A 3x3 matrix constrained to SO(3). Construction validates orthonormality
/// and orientation; use Rotation::project to build one from a drifted matrix.
class Rotation {
public:
    Rotation() : m_(Mat3::Identity()) {}

    /// Validating constructor. Throws TooFarFromSO3 if the matrix is not a
    /// rotation within the library tolerances.
    explicit Rotation(const Mat3& m);

    /// Nearest rotation (symmetric polar factor) to an arbitrary matrix in
    /// the 0.1-orthogonality ball.
    static Rotation project(const Mat3& m);

    const Mat3& matrix() const { return m_; }
    operator const Mat3&() const { return m_; }

    Rotation transpose() const { Rotation r; r.m_ = m_.transpose(); return r; }
    friend Rotation operator*(const Rotation& a, const Rotation& b) {
        Rotation r; r.m_ = a.m_ * b.m_; return r;
    }

private:
    Mat3 m_;
};

/// Skew-symmetric matrix of a: hat(a) b = a x b.
Mat3 hat(const Vec3& a);

/// Left inverse of hat. Throws NonSkewInput if S is not skew within tolerance.
Vec3 vee(const Mat3& S);

/// Exponential map so(3) -> SO(3) (Rodrigues; second-order series below the
/// small-angle threshold).
Rotation exp_so3(const Vec3& a);

/// Orthogonal projection of R to SO(3) via its symmetric polar factor.
/// Throws TooFarFromSO3 outside the 0.1-ball or if the polar factor would
/// have negative determinant.
Rotation renormalize(const Mat3& R);

/// Removes the component of v along Gamma. Throws NotUnit if |Gamma| != 1.
Vec3 project_tangent_s2(const Vec3& gamma, const Vec3& v);

} // namespace pend3d
