#include "pend3d/integrate.hpp"

#include <cmath>

namespace pend3d {

namespace {

Vec3 dexpinv(const Vec3& u, const Vec3& w) {
    return w + 0.5 * u.cross(w) + (1.0 / 12.0) * u.cross(u.cross(w));
}

Vec3 omegadot_full(const BodyParams& p, const Mat3& R, const Vec3& w) {
    const Vec3 gamma = R.transpose() * Vec3::UnitZ();
    return p.solveJ((p.J() * w).cross(w) + p.m() * p.g() * p.rho().cross(gamma));
}

void check_magnitude(double x) {
    if (!(x < tol::kStateBlowup)) {
        throw StepBlowup("integration step left the admissible state region");
    }
}

// Munthe-Kaas step: integrate (u, omega) with u(0) = 0, udot = dexpinv(u, w),
// then update R through exp(u).
std::pair<Mat3, Vec3> mk_step(const BodyParams& p, const Mat3& R, const Vec3& w0,
                              double h, int stages) {
    auto f = [&](const Vec3& u, const Vec3& w) {
        return std::make_pair(dexpinv(u, w),
                              omegadot_full(p, R * exp_so3(u).matrix(), w));
    };
    Vec3 u_end, w_end;
    if (stages == 2) { // explicit midpoint
        const auto [du1, dw1] = f(Vec3::Zero(), w0);
        const auto [du2, dw2] = f(0.5 * h * du1, w0 + 0.5 * h * dw1);
        u_end = h * du2;
        w_end = w0 + h * dw2;
    } else { // classical four-stage scheme
        const auto [du1, dw1] = f(Vec3::Zero(), w0);
        const auto [du2, dw2] = f(0.5 * h * du1, w0 + 0.5 * h * dw1);
        const auto [du3, dw3] = f(0.5 * h * du2, w0 + 0.5 * h * dw2);
        const auto [du4, dw4] = f(h * du3, w0 + h * dw3);
        u_end = (h / 6.0) * (du1 + 2.0 * du2 + 2.0 * du3 + du4);
        w_end = w0 + (h / 6.0) * (dw1 + 2.0 * dw2 + 2.0 * dw3 + dw4);
    }
    return {R * exp_so3(u_end).matrix(), w_end};
}

std::pair<Mat3, Vec3> rk4_raw_step(const BodyParams& p, const Mat3& R,
                                   const Vec3& w0, double h) {
    auto f = [&](const Mat3& Rk, const Vec3& wk) {
        return std::make_pair((Rk * hat(wk)).eval(), omegadot_full(p, Rk, wk));
    };
    const auto [kR1, kw1] = f(R, w0);
    const auto [kR2, kw2] = f(R + 0.5 * h * kR1, w0 + 0.5 * h * kw1);
    const auto [kR3, kw3] = f(R + 0.5 * h * kR2, w0 + 0.5 * h * kw2);
    const auto [kR4, kw4] = f(R + h * kR3, w0 + h * kw3);
    return {R + (h / 6.0) * (kR1 + 2.0 * kR2 + 2.0 * kR3 + kR4),
            w0 + (h / 6.0) * (kw1 + 2.0 * kw2 + 2.0 * kw3 + kw4)};
}

} // namespace

std::pair<Mat3, Vec3> step_full(const BodyParams& p, const Mat3& R,
                                const Vec3& omega, Method method, double h) {
    std::pair<Mat3, Vec3> out;
    switch (method) {
        case Method::Rk4Projected:
            out = rk4_raw_step(p, R, omega, h);
            break;
        case Method::LieGroupRk2:
            out = mk_step(p, R, omega, h, 2);
            break;
        case Method::LieGroupRk4:
            out = mk_step(p, R, omega, h, 4);
            break;
    }
    check_magnitude(out.second.norm());
    return out;
}

LPState step_lp(const BodyParams& p, const LPState& s, Method method, double h) {
    const int stages = method == Method::LieGroupRk2 ? 2 : 4;
    auto f = [&](const Vec3& g, const Vec3& w) {
        LPState st;
        st.gamma = g; // stage values may drift off the sphere slightly
        st.omega = w;
        return rhs_lp(p, st);
    };
    Vec3 g_end, w_end;
    if (stages == 2) {
        const auto [kw1, kg1] = f(s.gamma, s.omega);
        const auto [kw2, kg2] =
            f(s.gamma + 0.5 * h * kg1, s.omega + 0.5 * h * kw1);
        g_end = s.gamma + h * kg2;
        w_end = s.omega + h * kw2;
    } else {
        const auto [kw1, kg1] = f(s.gamma, s.omega);
        const auto [kw2, kg2] =
            f(s.gamma + 0.5 * h * kg1, s.omega + 0.5 * h * kw1);
        const auto [kw3, kg3] =
            f(s.gamma + 0.5 * h * kg2, s.omega + 0.5 * h * kw2);
        const auto [kw4, kg4] = f(s.gamma + h * kg3, s.omega + h * kw3);
        g_end = s.gamma + (h / 6.0) * (kg1 + 2.0 * kg2 + 2.0 * kg3 + kg4);
        w_end = s.omega + (h / 6.0) * (kw1 + 2.0 * kw2 + 2.0 * kw3 + kw4);
    }
    check_magnitude(w_end.norm());
    return LPState(g_end.normalized(), w_end);
}

LRState step_lr(const BodyParams& p, const LRState& s, Method method, double h) {
    const int stages = method == Method::LieGroupRk2 ? 2 : 4;
    auto f = [&](const Vec3& g, const Vec3& gd) {
        LRState st;
        st.gamma = g;
        st.gammadot = gd;
        st.mu = s.mu;
        return rhs_lr(p, st);
    };
    Vec3 g_end, gd_end;
    if (stages == 2) {
        const auto [kg1, kd1] = f(s.gamma, s.gammadot);
        const auto [kg2, kd2] =
            f(s.gamma + 0.5 * h * kg1, s.gammadot + 0.5 * h * kd1);
        g_end = s.gamma + h * kg2;
        gd_end = s.gammadot + h * kd2;
    } else {
        const auto [kg1, kd1] = f(s.gamma, s.gammadot);
        const auto [kg2, kd2] =
            f(s.gamma + 0.5 * h * kg1, s.gammadot + 0.5 * h * kd1);
        const auto [kg3, kd3] =
            f(s.gamma + 0.5 * h * kg2, s.gammadot + 0.5 * h * kd2);
        const auto [kg4, kd4] = f(s.gamma + h * kg3, s.gammadot + h * kd3);
        g_end = s.gamma + (h / 6.0) * (kg1 + 2.0 * kg2 + 2.0 * kg3 + kg4);
        gd_end = s.gammadot + (h / 6.0) * (kd1 + 2.0 * kd2 + 2.0 * kd3 + kd4);
    }
    check_magnitude(gd_end.norm());
    return LRState(g_end.normalized(), gd_end, s.mu);
}

namespace {

size_t step_count(const IntegratorConfig& cfg) {
    if (!(cfg.h > 0) || !(cfg.T >= 0)) {
        throw ValidationError("integrate: need h > 0 and T >= 0");
    }
    return static_cast<size_t>(std::llround(cfg.T / cfg.h));
}

} // namespace

std::vector<FullSample> integrate_full(const BodyParams& p, const FullState& s0,
                                       const IntegratorConfig& cfg) {
    const size_t n = step_count(cfg);
    std::vector<FullSample> out;
    out.reserve(n + 1);

    Mat3 R = s0.R.matrix();
    Vec3 w = s0.omega;
    auto record = [&](size_t k) {
        FullState s{Rotation::project(R), w};
        out.push_back({k * cfg.h, R, w, energy_full(p, s), momentum_h(p, s)});
    };
    record(0);
    for (size_t k = 0; k < n; ++k) {
        std::tie(R, w) = step_full(p, R, w, cfg.method, cfg.h);
        if (cfg.method == Method::Rk4Projected && cfg.renormalize_every > 0 &&
            (k + 1) % static_cast<size_t>(cfg.renormalize_every) == 0) {
            R = renormalize(R).matrix();
        }
        record(k + 1);
    }
    return out;
}

std::vector<LPSample> integrate_lp(const BodyParams& p, const LPState& s0,
                                   const IntegratorConfig& cfg) {
    const size_t n = step_count(cfg);
    std::vector<LPSample> out;
    out.reserve(n + 1);

    LPState s = s0;
    auto record = [&](size_t k) {
        out.push_back({k * cfg.h, s.gamma, s.omega, energy_lp(p, s),
                       s.omega.dot(p.J() * s.gamma)});
    };
    record(0);
    for (size_t k = 0; k < n; ++k) {
        s = step_lp(p, s, cfg.method, cfg.h);
        record(k + 1);
    }
    return out;
}

std::vector<LRSample> integrate_lr(const BodyParams& p, const LRState& s0,
                                   const IntegratorConfig& cfg) {
    const size_t n = step_count(cfg);
    std::vector<LRSample> out;
    out.reserve(n + 1);

    LRState s = s0;
    auto record = [&](size_t k) {
        out.push_back({k * cfg.h, s.gamma, s.gammadot, energy_lr(p, s), s.mu});
    };
    record(0);
    for (size_t k = 0; k < n; ++k) {
        s = step_lr(p, s, cfg.method, cfg.h);
        record(k + 1);
    }
    return out;
}

std::vector<PoincarePoint> poincare_map(const BodyParams& p, const LRState& s0,
                                        const PoincareSection& section,
                                        const IntegratorConfig& cfg) {
    if (section.E < -p.m() * p.g() * p.rho().norm()) {
        throw EmptySection("poincare_map: energy below the potential minimum");
    }
    auto g_of = [](const LRState& s) { return s.gammadot.z(); };
    auto admissible = [&](const LRState& s) {
        return s.gamma.z() > -1.0 + tol::kPoleExclusion &&
               s.gamma.z() < 1.0 - tol::kPoleExclusion &&
               Vec3::UnitZ().dot(s.gamma.cross(s.gammadot)) > 0.0;
    };

    std::vector<PoincarePoint> out;
    LRState s = s0;
    double t = 0.0;
    double g_prev = g_of(s);
    const size_t n = step_count(cfg);
    for (size_t k = 0; k < n; ++k) {
        const LRState s_next = step_lr(p, s, cfg.method, cfg.h);
        const double g_next = g_of(s_next);
        // strict sign change; tangencies are skipped
        if (g_prev * g_next < 0.0) {
            // bisection in the step fraction, re-stepping from s each time
            double lo = 0.0, hi = 1.0;
            LRState sc = s_next;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                sc = step_lr(p, s, cfg.method, cfg.h * mid);
                const double gm = g_of(sc);
                if (std::abs(gm) < section.crossing_tolerance) break;
                if (g_prev * gm < 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            if (admissible(sc)) {
                PoincarePoint pt;
                pt.gamma = sc.gamma;
                pt.t = t + 0.5 * (lo + hi) * cfg.h;
                pt.u = sc.gamma.x();
                pt.v = sc.gamma.y();
                pt.sign_gamma3 = sc.gamma.z() >= 0.0 ? 1 : -1;
                pt.energy_error = energy_lr(p, sc) - section.E;
                pt.g_residual = g_of(sc);
                out.push_back(pt);
                if (static_cast<int>(out.size()) >= section.max_crossings) {
                    return out;
                }
            }
        }
        s = s_next;
        g_prev = g_next;
        t += cfg.h;
    }
    if (out.empty()) {
        throw NoCrossings("poincare_map: no section crossings before T");
    }
    return out;
}

std::tuple<FullState, LPState, LRState> build_initial(const BodyParams& p,
                                                      const Rotation& R0,
                                                      const Vec3& omega0) {
    FullState full{R0, omega0};
    const Vec3 gamma = R0.matrix().transpose() * Vec3::UnitZ();
    LPState lp(gamma, omega0);
    const double mu = omega0.dot(p.J() * gamma);
    LRState lr(gamma, gamma.cross(omega0), mu);
    return {full, lp, lr};
}

} // namespace pend3d
