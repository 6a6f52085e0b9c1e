#include "pend3d/reduction.hpp"

#include <cmath>

#include "pend3d/linearization.hpp"

namespace pend3d {

LPState project(const FullState& s) {
    return LPState(s.R.matrix().transpose() * Vec3::UnitZ(), s.omega);
}

Vec3 omega_hor(const BodyParams& p, const Vec3& gamma, const Vec3& gammadot) {
    const Vec3 w = gammadot.cross(gamma);
    const double b = (p.J() * gamma).dot(w) / gamma.dot(p.J() * gamma);
    return w - b * gamma;
}

Rotation frame_over(const Vec3& gamma) {
    const auto [t1, t2] = tangent_basis(gamma);
    Mat3 m;
    m.row(0) = t1.transpose();
    m.row(1) = t2.transpose();
    m.row(2) = gamma.transpose();
    return Rotation(m);
}

namespace {

// truncated dexpinv for so(3); sufficient through 4th-order one-step schemes
Vec3 dexpinv(const Vec3& u, const Vec3& w) {
    return w + 0.5 * u.cross(w) + (1.0 / 12.0) * u.cross(u.cross(w));
}

struct CurvePoint {
    Vec3 gamma, gammadot;
};

// Cubic Hermite interpolant between two curve samples, renormalized onto
// the sphere with the exact derivative of the normalized curve. Keeps the
// lift independent of how the curve was produced (dynamics or kinematics).
CurvePoint hermite(const Vec3& g0, const Vec3& d0, const Vec3& g1,
                   const Vec3& d1, double h, double s) {
    const double s2 = s * s, s3 = s2 * s;
    const Vec3 g = (2 * s3 - 3 * s2 + 1) * g0 + (s3 - 2 * s2 + s) * h * d0 +
                   (-2 * s3 + 3 * s2) * g1 + (s3 - s2) * h * d1;
    const Vec3 d = ((6 * s2 - 6 * s) * g0 + (3 * s2 - 4 * s + 1) * h * d0 +
                    (-6 * s2 + 6 * s) * g1 + (3 * s2 - 2 * s) * h * d1) /
                   h;
    const double n = g.norm();
    const Vec3 gn = g / n;
    return {gn, (d - gn * gn.dot(d)) / n};
}

// One Munthe-Kaas RK4 step of the horizontal-lift ODE along the sampled
// curve.
Mat3 lift_step(const BodyParams& p, const Mat3& Rh, const CurvePoint& a,
               const CurvePoint& b, double h) {
    const CurvePoint mid =
        hermite(a.gamma, a.gammadot, b.gamma, b.gammadot, h, 0.5);
    const Vec3 wa = omega_hor(p, a.gamma, a.gammadot);
    const Vec3 wm = omega_hor(p, mid.gamma, mid.gammadot);
    const Vec3 wb = omega_hor(p, b.gamma, b.gammadot);
    const Vec3 k1 = dexpinv(Vec3::Zero(), wa);
    const Vec3 k2 = dexpinv(0.5 * h * k1, wm);
    const Vec3 k3 = dexpinv(0.5 * h * k2, wm);
    const Vec3 k4 = dexpinv(h * k3, wb);
    const Vec3 u = (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return Rh * exp_so3(u).matrix();
}

} // namespace

ReconstructedTrajectory reconstruct(const BodyParams& p,
                                    const ReducedTrajectory& traj,
                                    const Rotation& R0, Quadrature quad) {
    const size_t n = traj.t.size();
    if (n == 0 || traj.gamma.size() != n || traj.gammadot.size() != n) {
        throw ValidationError("reconstruct: inconsistent trajectory arrays");
    }
    const Vec3 g0 = R0.matrix().transpose() * Vec3::UnitZ();
    if ((g0 - traj.gamma.front()).norm() > tol::kLiftMatch) {
        throw InitialMismatch("reconstruct: Pi(R0) != Gamma(0)");
    }

    ReconstructedTrajectory out;
    out.t = traj.t;
    out.R_hor.resize(n);
    out.R.resize(n);
    out.omega.resize(n);
    out.theta_dyn.resize(n);

    // step 1: horizontal lift
    out.R_hor[0] = R0.matrix();
    for (size_t k = 0; k + 1 < n; ++k) {
        const double h = traj.t[k + 1] - traj.t[k];
        out.R_hor[k + 1] = lift_step(
            p, out.R_hor[k], {traj.gamma[k], traj.gammadot[k]},
            {traj.gamma[k + 1], traj.gammadot[k + 1]}, h);
    }

    // step 2: dynamic phase by quadrature of nu(t)
    std::vector<double> nu(n);
    for (size_t k = 0; k < n; ++k) {
        nu[k] = traj.mu / traj.gamma[k].dot(p.J() * traj.gamma[k]);
    }
    out.theta_dyn[0] = 0.0;
    if (quad == Quadrature::Trapezoid || n < 3) {
        for (size_t k = 0; k + 1 < n; ++k) {
            const double h = traj.t[k + 1] - traj.t[k];
            out.theta_dyn[k + 1] =
                out.theta_dyn[k] + 0.5 * h * (nu[k] + nu[k + 1]);
        }
    } else {
        // composite Simpson over pairs of intervals; trapezoid closes an
        // odd tail
        for (size_t k = 0; k + 2 < n; k += 2) {
            const double h = traj.t[k + 1] - traj.t[k];
            out.theta_dyn[k + 1] =
                out.theta_dyn[k] + h / 12.0 * (5.0 * nu[k] + 8.0 * nu[k + 1] -
                                               nu[k + 2]);
            out.theta_dyn[k + 2] =
                out.theta_dyn[k] + h / 3.0 * (nu[k] + 4.0 * nu[k + 1] +
                                              nu[k + 2]);
        }
        if (n % 2 == 0) {
            const double h = traj.t[n - 1] - traj.t[n - 2];
            out.theta_dyn[n - 1] =
                out.theta_dyn[n - 2] + 0.5 * h * (nu[n - 2] + nu[n - 1]);
        }
    }

    // step 3: reassembly
    for (size_t k = 0; k < n; ++k) {
        out.R[k] =
            exp_so3(Vec3(0, 0, out.theta_dyn[k])).matrix() * out.R_hor[k];
        out.omega[k] = omega_hor(p, traj.gamma[k], traj.gammadot[k]) +
                       nu[k] * traj.gamma[k];
    }
    return out;
}

namespace {

double phase_integrand(const BodyParams& p, const Vec3& gamma) {
    const Vec3 Jg = p.J() * gamma;
    const double gJg = gamma.dot(Jg);
    return (2.0 * Jg.squaredNorm() - p.J().trace() * gJg) / (gJg * gJg);
}

// signed solid angle of the spherical triangle (a, b, c)
double solid_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
    const double num = a.dot(b.cross(c));
    const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    return 2.0 * std::atan2(num, den);
}

double integrate_triangle(const BodyParams& p, const Vec3& a, const Vec3& b,
                          const Vec3& c, double max_edge) {
    const double e = std::max({(a - b).norm(), (b - c).norm(), (c - a).norm()});
    if (e < max_edge) {
        const Vec3 mid = (a + b + c).normalized();
        return phase_integrand(p, mid) * solid_angle(a, b, c);
    }
    const Vec3 ab = (a + b).normalized();
    const Vec3 bc = (b + c).normalized();
    const Vec3 ca = (c + a).normalized();
    return integrate_triangle(p, a, ab, ca, max_edge) +
           integrate_triangle(p, ab, b, bc, max_edge) +
           integrate_triangle(p, ca, bc, c, max_edge) +
           integrate_triangle(p, ab, bc, ca, max_edge);
}

} // namespace

double geometric_phase_surface(const BodyParams& p,
                               const std::vector<Vec3>& loop) {
    if (loop.size() < 3) {
        throw NotClosed("geometric_phase_surface: loop needs >= 3 samples");
    }
    if ((loop.front() - loop.back()).norm() > tol::kLoopClosure) {
        throw NotClosed("geometric_phase_surface: loop endpoints differ");
    }
    Vec3 centroid = Vec3::Zero();
    for (const Vec3& g : loop) centroid += g;
    if (centroid.norm() < 1e-9) {
        throw ValidationError(
            "geometric_phase_surface: loop centroid is ambiguous "
            "(spans more than a hemisphere; split the loop)");
    }
    centroid.normalize();

    double phase = 0.0;
    const double max_edge = 0.02;
    for (size_t k = 0; k + 1 < loop.size(); ++k) {
        const Vec3 a = loop[k].normalized();
        const Vec3 b = loop[k + 1].normalized();
        if ((a - b).norm() < 1e-14) continue;
        phase += integrate_triangle(p, centroid, a, b, max_edge);
    }
    return phase;
}

double PhaseResult::total() const { return wrapped + 2.0 * M_PI * winding; }

PhaseResult geometric_phase_reconstruct(const BodyParams& p,
                                        const ReducedTrajectory& loop) {
    if (loop.mu != 0.0) {
        throw ValidationError("geometric_phase_reconstruct: mu must be 0");
    }
    if ((loop.gamma.front() - loop.gamma.back()).norm() > tol::kLoopClosure) {
        throw NotClosed("geometric_phase_reconstruct: loop endpoints differ");
    }
    const Rotation R0 = frame_over(loop.gamma.front());
    const ReconstructedTrajectory rec = reconstruct(p, loop, R0);

    const Mat3 A = rec.R.back() * rec.R.front().transpose();
    if ((A * Vec3::UnitZ() - Vec3::UnitZ()).norm() > tol::kVerticalRotation) {
        throw NotVerticalRotation(
            "geometric_phase_reconstruct: R(T)R(0)^T is not vertical");
    }
    PhaseResult out;
    out.wrapped = std::atan2(A(1, 0), A(0, 0));

    // winding from a continuously tracked horizontal marker
    const Vec3 xi = rec.R.front().transpose() * Vec3::UnitX();
    double unwrapped = 0.0;
    double prev = 0.0;
    for (size_t k = 0; k < rec.R.size(); ++k) {
        const Vec3 m = rec.R[k] * xi;
        const double az = std::atan2(m.y(), m.x());
        if (k > 0) {
            double d = az - prev;
            while (d > M_PI) d -= 2.0 * M_PI;
            while (d < -M_PI) d += 2.0 * M_PI;
            unwrapped += d;
        }
        prev = az;
    }
    out.winding =
        static_cast<int>(std::lround((unwrapped - out.wrapped) / (2.0 * M_PI)));
    return out;
}

} // namespace pend3d
