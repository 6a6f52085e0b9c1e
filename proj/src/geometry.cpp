#include "pend3d/geometry.hpp"

#include <cmath>

namespace pend3d {

namespace {

double so3_residual(const Mat3& m) {
    return (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
}

} // namespace

Rotation::Rotation(const Mat3& m) : m_(m) {
    if (so3_residual(m) > tol::kOrthonormality ||
        std::abs(m.determinant() - 1.0) > tol::kDeterminant) {
        throw TooFarFromSO3("Rotation: matrix is not in SO(3) within tolerance");
    }
}

Rotation Rotation::project(const Mat3& m) { return renormalize(m); }

Mat3 hat(const Vec3& a) {
    Mat3 s;
    s <<    0, -a.z(),  a.y(),
         a.z(),     0, -a.x(),
        -a.y(),  a.x(),     0;
    return s;
}

Vec3 vee(const Mat3& S) {
    const double residual = (S + S.transpose()).cwiseAbs().maxCoeff();
    if (residual > tol::kSkewResidual) {
        throw NonSkewInput("vee: input is not skew-symmetric (residual " +
                           std::to_string(residual) + ")");
    }
    return Vec3(S(2, 1), S(0, 2), S(1, 0));
}

Rotation exp_so3(const Vec3& a) {
    const double theta = a.norm();
    const Mat3 A = hat(a);
    Mat3 m;
    if (theta < tol::kSmallAngle) {
        // second-order series, exact to machine precision at this scale
        m = Mat3::Identity() + A + 0.5 * A * A;
    } else {
        m = Mat3::Identity() + (std::sin(theta) / theta) * A +
            ((1.0 - std::cos(theta)) / (theta * theta)) * A * A;
    }
    return Rotation(m);
}

Rotation renormalize(const Mat3& R) {
    if (so3_residual(R) > tol::kRenormalizeBall) {
        throw TooFarFromSO3("renormalize: matrix outside the 0.1 orthogonality ball");
    }
    Eigen::JacobiSVD<Mat3> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 Q = svd.matrixU() * svd.matrixV().transpose();
    if (Q.determinant() < 0) {
        throw TooFarFromSO3("renormalize: nearest orthogonal matrix has det -1");
    }
    return Rotation(Q);
}

Vec3 project_tangent_s2(const Vec3& gamma, const Vec3& v) {
    if (std::abs(gamma.norm() - 1.0) > tol::kUnitNorm) {
        throw NotUnit("project_tangent_s2: Gamma is not a unit vector");
    }
    return v - gamma.dot(v) * gamma;
}

} // namespace pend3d
