// End-to-end acceptance gate: one pass/fail line per criterion, nonzero
// exit when anything fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pend3d/cli.hpp"
#include "pend3d/conservation.hpp"
#include "pend3d/equilibria.hpp"
#include "pend3d/integrate.hpp"
#include "pend3d/linearization.hpp"
#include "pend3d/reduction.hpp"

using namespace pend3d;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

BodyParams reference_body() {
    return BodyParams(Vec3(0.13, 0.28, 0.17).asDiagonal(), 1.0, 9.81,
                      Vec3(0.0, 0.0, 0.3));
}

// criterion 1: conservation over ten seconds, fast
bool conservation() {
    const auto t0 = Clock::now();
    const BodyParams p = reference_body();
    IntegratorConfig cfg; // liegroup-rk4, h = 1e-3, T = 10
    const auto traj = integrate_full(p, FullState{Rotation(), Vec3::Ones()},
                                     cfg);
    const double E0 = traj.front().E;
    const double h0 = traj.front().h_momentum;
    double de = 0.0, dh = 0.0;
    for (const auto& s : traj) {
        de = std::max(de, std::abs(s.E - E0));
        dh = std::max(dh, std::abs(s.h_momentum - h0));
    }
    return de / std::abs(E0) <= 1e-8 && dh / std::abs(h0) <= 1e-8 &&
           seconds_since(t0) < 5.0;
}

// criterion 2: elliptic-cylinder catalog, residuals, no degenerate rows
bool equilibria_residuals() {
    const auto t0 = Clock::now();
    const BodyParams p(Vec3(0.4486, 0.3943, 0.0772).asDiagonal(), 1.0, 9.81,
                       Vec3(-0.0140, 0.1044, 0.4989));
    const auto eqs = enumerate_lp(p);
    int alpha_rows = 0;
    for (const auto& e : eqs) {
        if (e.residual > 1e-10) return false;
        if (e.family == EquilibriumFamily::DegenerateDistinct ||
            e.family == EquilibriumFamily::DegenerateAxisym) {
            return false;
        }
        if (e.family == EquilibriumFamily::AlphaFamily) ++alpha_rows;
    }
    return alpha_rows == 100 * 4 * 2 && eqs.size() == 804 &&
           seconds_since(t0) < 1.0;
}

// criterion 3: limiting attitudes of the alpha family
bool family_limits() {
    const BodyParams p(Vec3(0.4486, 0.3943, 0.0772).asDiagonal(), 1.0, 9.81,
                       Vec3(-0.0140, 0.1044, 0.4989));
    EquilibriaGrid grid;
    grid.alpha_min_abs = 1e-6;
    grid.alpha_max_abs = 1e6;
    const auto eqs = enumerate_lp(p, grid);
    const Vec3 hang = p.rho().normalized();
    const Vec3 axis = -(p.Jinv() * p.rho()).normalized();
    bool near_down = false, near_up = false, near_axis = false;
    for (const auto& e : eqs) {
        if (e.family != EquilibriumFamily::AlphaFamily) continue;
        if (std::abs(e.alpha) <= 1.0000001e-6) {
            if (e.omega_e.norm() > 1e-2) return false;
            if ((e.gamma_e - hang).norm() <= 1e-3) near_down = true;
            if ((e.gamma_e + hang).norm() <= 1e-3) near_up = true;
        }
        if (std::abs(e.alpha) >= 0.9999999e6 &&
            (e.gamma_e - axis).norm() <= 1e-3) {
            near_axis = true;
        }
    }
    return near_down && near_up && near_axis;
}

// criterion 4: linearized frequencies plus difference-quotient cross-check
bool linearization_criterion() {
    const BodyParams p = reference_body();
    const LinearModel hang = linearize(p, EquilibriumSide::Hanging,
                                       ModelTag::LR);
    std::vector<double> mags;
    for (const auto& e : hang.eigenvalues) {
        if (std::abs(e.real()) > 1e-10) return false;
        mags.push_back(std::abs(e));
    }
    std::sort(mags.begin(), mags.end());
    if (std::abs(mags[0] - 3.24202) > 1e-4 ||
        std::abs(mags[1] - 3.24202) > 1e-4 ||
        std::abs(mags[2] - 4.75800) > 1e-4 ||
        std::abs(mags[3] - 4.75800) > 1e-4) {
        return false;
    }
    const LinearModel inv = linearize(p, EquilibriumSide::Inverted,
                                      ModelTag::LR);
    std::vector<double> invmags;
    for (const auto& e : inv.eigenvalues) {
        if (std::abs(e.imag()) > 1e-10) return false;
        invmags.push_back(std::abs(e));
    }
    std::sort(invmags.begin(), invmags.end());
    for (int i = 0; i < 4; ++i) {
        if (std::abs(invmags[i] - mags[i]) > 1e-4) return false;
    }

    for (const EquilibriumSide side :
         {EquilibriumSide::Hanging, EquilibriumSide::Inverted}) {
        const double sgn = side == EquilibriumSide::Hanging ? 1.0 : -1.0;
        const Vec3 gamma = sgn * p.rho().normalized();
        const Rotation R = side == EquilibriumSide::Hanging
                               ? Rotation()
                               : exp_so3(Vec3(M_PI, 0.0, 0.0));
        for (const ModelTag tag :
             {ModelTag::Full, ModelTag::LP, ModelTag::LR}) {
            Eigen::MatrixXd A;
            switch (tag) {
                case ModelTag::Full:
                    A = fd_jacobian_full(p, FullState{R, Vec3::Zero()}, 1e-5);
                    break;
                case ModelTag::LP:
                    A = fd_jacobian_lp(p, LPState(gamma, Vec3::Zero()), 1e-5);
                    break;
                case ModelTag::LR:
                    A = fd_jacobian_lr(p, LRState(gamma, Vec3::Zero(), 0.0),
                                       1e-5);
                    break;
            }
            Eigen::EigenSolver<Eigen::MatrixXd> es(A);
            std::vector<double> a, b;
            for (int i = 0; i < es.eigenvalues().size(); ++i) {
                a.push_back(std::abs(es.eigenvalues()(i)));
            }
            for (const auto& e : linearize(p, side, tag).eigenvalues) {
                b.push_back(std::abs(e));
            }
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            for (size_t i = 0; i < a.size(); ++i) {
                if (b[i] < 1e-8) {
                    if (a[i] > 1e-5) return false;
                } else if (std::abs(a[i] - b[i]) / b[i] > 1e-5) {
                    return false;
                }
            }
        }
    }
    return true;
}

// criterion 5: the three models shadow each other from matched initial data
bool model_tower() {
    const BodyParams p = reference_body();
    const Rotation R0 = exp_so3(Vec3(0.3, -0.2, 0.1));
    const Vec3 w0 = 0.5 * Vec3::Ones();
    const auto [full0, lp0, lr0] = build_initial(p, R0, w0);

    IntegratorConfig cfg; // T = 10
    const auto full = integrate_full(p, full0, cfg);
    const auto lp = integrate_lp(p, lp0, cfg);
    const auto lr = integrate_lr(p, lr0, cfg);
    if (full.size() != lp.size() || full.size() != lr.size()) return false;
    for (size_t k = 0; k < full.size(); ++k) {
        const Vec3 gf = full[k].R.transpose() * Vec3::UnitZ();
        if ((gf - lp[k].gamma).norm() > 1e-6) return false;
        if ((gf - lr[k].gamma).norm() > 1e-6) return false;
        if ((lp[k].gamma - lr[k].gamma).norm() > 1e-6) return false;
        if (std::abs(lr[k].E - full[k].E) > 1e-10) return false;
    }
    return true;
}

// criterion 6: reconstruction round trip
bool reconstruction() {
    const BodyParams p = reference_body();
    const Rotation R0 = exp_so3(Vec3(0.3, -0.2, 0.1));
    const Vec3 w0(0.7, -0.4, 0.9);
    const auto [full0, lp0, lr0] = build_initial(p, R0, w0);

    IntegratorConfig cfg;
    cfg.T = 5.0;
    const auto full = integrate_full(p, full0, cfg);
    const auto lr = integrate_lr(p, lr0, cfg);

    ReducedTrajectory red;
    red.mu = lr0.mu;
    for (const auto& a : lr) {
        red.t.push_back(a.t);
        red.gamma.push_back(a.gamma);
        red.gammadot.push_back(a.gammadot);
    }
    const auto rec = reconstruct(p, red, R0);
    for (size_t k = 0; k < full.size(); ++k) {
        if ((rec.R[k] - full[k].R).norm() > 1e-5) return false;
        if ((rec.omega[k] - full[k].omega).norm() > 1e-5) return false;
        const FullState st{Rotation::project(rec.R[k]), rec.omega[k]};
        if (std::abs(momentum_map(p, st) - lr0.mu) > 1e-8) return false;
        const Vec3 gh = rec.R_hor[k].transpose() * Vec3::UnitZ();
        const Vec3 wh = omega_hor(p, red.gamma[k], red.gammadot[k]);
        if (std::abs(wh.dot(p.J() * gh)) > 1e-9) return false;
    }
    return true;
}

// criterion 7: geometric phase, analytic isotropic case + method agreement
bool geometric_phase() {
    const double theta0 = 0.5;
    const double expect = -2.0 * M_PI * (1.0 - std::cos(theta0));
    auto loop_of = [&](int samples) {
        ReducedTrajectory loop;
        for (int k = 0; k <= samples; ++k) {
            const double phi = 2.0 * M_PI * k / samples;
            loop.t.push_back(phi);
            loop.gamma.emplace_back(std::sin(theta0) * std::cos(phi),
                                    std::sin(theta0) * std::sin(phi),
                                    std::cos(theta0));
            loop.gammadot.emplace_back(-std::sin(theta0) * std::sin(phi),
                                       std::sin(theta0) * std::cos(phi), 0.0);
        }
        loop.gamma.back() = loop.gamma.front();
        loop.gammadot.back() = loop.gammadot.front();
        return loop;
    };
    const ReducedTrajectory loop = loop_of(1024);

    const BodyParams iso(0.2 * Mat3::Identity(), 1.0, 9.81, Vec3(0, 0, 0.3));
    if (std::abs(geometric_phase_surface(iso, loop.gamma) - expect) > 1e-4) {
        return false;
    }
    if (std::abs(geometric_phase_reconstruct(iso, loop).total() - expect) >
        1e-4) {
        return false;
    }

    const BodyParams p = reference_body();
    const double surf = geometric_phase_surface(p, loop.gamma);
    const double rec = geometric_phase_reconstruct(p, loop).total();
    return std::abs(surf - rec) <= 1e-3;
}

// criterion 8: section contract plus regime separation at the five energies
bool poincare_regimes() {
    const auto t0 = Clock::now();
    const BodyParams p = reference_body();
    const Vec3 gamma0 = Vec3::UnitZ();
    const Vec3 dir = Vec3(1, 1, 1).normalized();
    const double v0 = p.m() * p.g() * p.rho().dot(gamma0);
    const double kin = 0.5 * dir.dot(p.J() * dir);

    std::vector<int> occupancy;
    for (const double E : {-2.65, 0.0, 2.03, 8.83, 11.95}) {
        const double c = std::sqrt((E + v0) / kin);
        const auto [f0, l0, r0] = build_initial(p, Rotation(), c * dir);
        (void)f0;
        (void)l0;
        PoincareSection sec;
        sec.E = E;
        sec.mu = r0.mu;
        sec.max_crossings = 5000;
        IntegratorConfig cfg;
        cfg.T = 600.0;
        const auto pts = poincare_map(p, r0, sec, cfg);
        if (pts.empty()) return false;
        std::set<int> bins;
        for (const auto& q : pts) {
            if (std::abs(q.g_residual) > 1e-9) return false;
            if (std::abs(q.energy_error) > 1e-7) return false;
            if (std::abs(q.gamma.norm() - 1.0) > 1e-10) return false;
            const int bu = std::min(
                49, std::max(0, static_cast<int>((q.u + 1.0) / 2.0 * 50)));
            const int bv = std::min(
                49, std::max(0, static_cast<int>((q.v + 1.0) / 2.0 * 50)));
            bins.insert(50 * bu + bv);
        }
        occupancy.push_back(static_cast<int>(bins.size()));
    }
    // quasi-periodic shell stays thin; the stochastic shells spread out
    if (occupancy[1] <= 5 * occupancy[0]) return false;
    if (occupancy[2] <= 5 * occupancy[0]) return false;
    return seconds_since(t0) < 60.0;
}

// criterion 9: axisymmetric, planar, and spherical special cases
bool special_cases() {
    const BodyParams ax(Vec3(0.2, 0.2, 0.05).asDiagonal(), 1.0, 9.81,
                        Vec3(0.0, 0.0, 0.3));
    IntegratorConfig cfg; // T = 10
    const auto traj = integrate_lp(
        ax, LPState(Vec3(0.6, 0.0, 0.8).normalized(), Vec3(0.2, -0.1, 1.5)),
        cfg);
    for (const auto& s : traj) {
        if (std::abs(s.omega.z() - 1.5) > 1e-12) return false;
    }

    // planar: full model started in the x-z plane vs scalar pendulum
    const double h = 1e-3;
    {
        const double theta0 = 0.7, w0 = 0.3;
        const auto full = integrate_full(
            ax, FullState{exp_so3(Vec3(0.0, theta0, 0.0)), Vec3(0, w0, 0)},
            cfg);
        double th = theta0, w = w0;
        for (size_t k = 0; k < full.size(); ++k) {
            const Vec3 gamma = full[k].R.transpose() * Vec3::UnitZ();
            if (std::abs(gamma.z() - std::cos(th)) > 1e-8) return false;
            if (std::abs(full[k].omega.y() - w) > 1e-8) return false;
            auto f = [&](double t_, double w_) {
                const Eigen::Vector2d d = rhs_planar(ax, t_, w_);
                return std::make_pair(d(0), d(1));
            };
            const auto [k1t, k1w] = f(th, w);
            const auto [k2t, k2w] = f(th + 0.5 * h * k1t, w + 0.5 * h * k1w);
            const auto [k3t, k3w] = f(th + 0.5 * h * k2t, w + 0.5 * h * k2w);
            const auto [k4t, k4w] = f(th + h * k3t, w + h * k3w);
            th += h / 6.0 * (k1t + 2 * k2t + 2 * k3t + k4t);
            w += h / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
        }
    }

    // spherical: zero spin, starting with omega_x = Gamma_y = 0 stays planar
    {
        Vec3 gamma(std::sin(0.4), 0.0, std::cos(0.4));
        Eigen::Vector2d wxy(0.0, 0.6);
        for (int k = 0; k < 10000; ++k) {
            auto f = [&](const Vec3& g, const Eigen::Vector2d& w_) {
                return rhs_spherical(ax, g, w_);
            };
            const auto [k1g, k1w] = f(gamma, wxy);
            const auto [k2g, k2w] =
                f(gamma + 0.5 * h * k1g, wxy + 0.5 * h * k1w);
            const auto [k3g, k3w] =
                f(gamma + 0.5 * h * k2g, wxy + 0.5 * h * k2w);
            const auto [k4g, k4w] = f(gamma + h * k3g, wxy + h * k3w);
            gamma += h / 6.0 * (k1g + 2 * k2g + 2 * k3g + k4g);
            wxy += h / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
            gamma.normalize();
            if (std::abs(wxy(0)) > 1e-10) return false;
            if (std::abs(gamma.y()) > 1e-10) return false;
        }
    }
    return true;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// criterion 10: byte-identical outputs for repeated runs
bool determinism() {
    Scenario s = parse_config(
        "task = simulate\n"
        "initial.omega = 1 1 1\n"
        "integrator.T = 1\n");
    const fs::path base =
        fs::temp_directory_path() / "pend3d_acceptance_determinism";
    const fs::path a = base / "a", b = base / "b";
    fs::remove_all(base);
    if (run(s, a.string()) != 0) return false;
    if (run(s, b.string()) != 0) return false;
    const bool same =
        slurp(a / "trajectory.csv") == slurp(b / "trajectory.csv") &&
        !slurp(a / "trajectory.csv").empty();
    fs::remove_all(base);
    return same;
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        bool (*fn)();
    };
    const Criterion criteria[] = {
        {"1 conservation", conservation},
        {"2 equilibria residuals", equilibria_residuals},
        {"3 family limits", family_limits},
        {"4 linearization", linearization_criterion},
        {"5 model tower", model_tower},
        {"6 reconstruction", reconstruction},
        {"7 geometric phase", geometric_phase},
        {"8 poincare regimes", poincare_regimes},
        {"9 special cases", special_cases},
        {"10 determinism", determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        bool ok = false;
        try {
            ok = c.fn();
        } catch (const std::exception& e) {
            std::fprintf(stderr, "criterion %s threw: %s\n", c.name, e.what());
        }
        std::printf("criterion %s: %s\n", c.name, ok ? "PASS" : "FAIL");
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
