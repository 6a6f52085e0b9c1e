#include "pend3d/equilibria.hpp"

#include <algorithm>
#include <cmath>

namespace pend3d {

std::string family_name(EquilibriumFamily f) {
    switch (f) {
        case EquilibriumFamily::Hanging: return "hanging";
        case EquilibriumFamily::Inverted: return "inverted";
        case EquilibriumFamily::InvInertiaAxis: return "axis";
        case EquilibriumFamily::AlphaFamily: return "alpha_family";
        case EquilibriumFamily::DegenerateDistinct: return "degenerate_distinct";
        case EquilibriumFamily::DegenerateAxisym: return "degenerate_axisym";
    }
    return "unknown";
}

Vec3 n_alpha(const BodyParams& p, double alpha) {
    if (std::abs(alpha) <= 1e-12) {
        throw SingularAlpha("n_alpha: alpha = 0");
    }
    for (int i = 0; i < 3; ++i) {
        const double pole = 1.0 / p.J()(i, i);
        if (std::abs(alpha - pole) <= tol::kAlphaGuard * std::abs(pole)) {
            throw SingularAlpha("n_alpha: alpha at pole 1/J_" +
                                std::to_string(i + 1));
        }
    }
    const Mat3 A = p.J() - (1.0 / alpha) * Mat3::Identity();
    return A.fullPivLu().solve(p.rho());
}

double check_equilibrium(const BodyParams& p, const Equilibrium& e) {
    const Vec3 dyn = (p.J() * e.omega_e).cross(e.omega_e) +
                     p.m() * p.g() * p.rho().cross(e.gamma_e);
    const Vec3 kin = e.gamma_e.cross(e.omega_e);
    return dyn.norm() + kin.norm();
}

namespace {

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> out;
    if (n <= 0 || hi <= lo) return out;
    if (n == 1) { out.push_back(lo); return out; }
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i) {
        out.push_back(std::exp(llo + (lhi - llo) * i / (n - 1)));
    }
    return out;
}

// Samples a bounded interval with poles at both ends: log-spaced offsets
// from each endpoint, meeting at the midpoint.
std::vector<double> sample_both_poles(double a, double b, double clamp, int n) {
    std::vector<double> out;
    const double half = 0.5 * (b - a);
    if (half <= 0) return out;
    const int m1 = n / 2, m2 = n - m1;
    for (double d : logspace(std::abs(a) * clamp, half, m1)) out.push_back(a + d);
    for (double d : logspace(std::abs(b) * clamp, half, m2)) out.push_back(b - d);
    std::sort(out.begin(), out.end());
    return out;
}

void push_pair(std::vector<Equilibrium>& out, const BodyParams& p,
               const Vec3& axis, EquilibriumFamily family, double alpha,
               double delta, int interval) {
    // attitude -axis/|axis|, angular velocity +-sqrt(mg/|axis|) axis
    const double nn = axis.norm();
    const Vec3 gamma_e = -axis / nn;
    const Vec3 w = std::sqrt(p.m() * p.g() / nn) * axis;
    for (int sign : {+1, -1}) {
        Equilibrium e;
        e.gamma_e = gamma_e;
        e.omega_e = sign * w;
        e.family = family;
        e.alpha = alpha;
        e.delta = delta;
        e.interval = interval;
        const double k = e.omega_e.dot(e.gamma_e);
        e.mu = k * e.gamma_e.dot(p.J() * e.gamma_e);
        e.residual = check_equilibrium(p, e);
        out.push_back(e);
    }
}

} // namespace

std::vector<Equilibrium> enumerate_lp(const BodyParams& p,
                                      const EquilibriaGrid& grid) {
    if (!p.diagonal()) {
        throw NonDiagonalInertia("enumerate_lp: inertia matrix must be diagonal");
    }
    const double J1 = p.J()(0, 0), J2 = p.J()(1, 1), J3 = p.J()(2, 2);
    if (!(J1 >= J2 && J2 >= J3)) {
        throw ValidationError("enumerate_lp: expected J1 >= J2 >= J3");
    }
    const Vec3& rho = p.rho();
    std::vector<Equilibrium> out;

    // 1-2: hanging and inverted
    for (int sign : {+1, -1}) {
        Equilibrium e;
        e.gamma_e = sign * rho.normalized();
        e.omega_e = Vec3::Zero();
        e.family = sign > 0 ? EquilibriumFamily::Hanging
                            : EquilibriumFamily::Inverted;
        e.residual = check_equilibrium(p, e);
        out.push_back(e);
    }

    // 3: the two J^-1 rho relative equilibria
    push_pair(out, p, p.solveJ(rho), EquilibriumFamily::InvInertiaAxis, 0, 0, 0);

    // 4-5: alpha family over L1..L4
    const double p1 = 1.0 / J1, p2 = 1.0 / J2, p3 = 1.0 / J3;
    const int n = grid.alpha_samples_per_interval;
    std::vector<std::pair<int, std::vector<double>>> intervals;
    {
        // L1 = (-inf, 0) u (1/J3, inf): half the budget per branch
        std::vector<double> l1;
        auto neg = logspace(grid.alpha_min_abs, grid.alpha_max_abs, n / 2);
        for (auto it = neg.rbegin(); it != neg.rend(); ++it) l1.push_back(-*it);
        const double lo = p3 * (1.0 + grid.pole_clamp);
        const double hi = std::max(grid.alpha_max_abs, 10.0 * lo);
        for (double a : logspace(lo, hi, n - n / 2)) l1.push_back(a);
        intervals.emplace_back(1, std::move(l1));
    }
    intervals.emplace_back(2, [&] {
        auto v = logspace(grid.alpha_min_abs, p1 * (1.0 - grid.pole_clamp), n);
        return v;
    }());
    intervals.emplace_back(3, sample_both_poles(p1, p2, grid.pole_clamp, n));
    intervals.emplace_back(4, sample_both_poles(p2, p3, grid.pole_clamp, n));

    for (const auto& [label, alphas] : intervals) {
        for (double a : alphas) {
            Vec3 na;
            try {
                na = n_alpha(p, a);
            } catch (const SingularAlpha&) {
                continue; // degenerate inertia collapses an interval
            }
            push_pair(out, p, na, EquilibriumFamily::AlphaFamily, a, 0, label);
        }
    }

    // 6: distinct inertia values with a vanishing rho component
    const double jscale = J1;
    const bool distinct = (J1 - J2) > tol::kDegeneracy * jscale &&
                          (J2 - J3) > tol::kDegeneracy * jscale;
    const double rscale = rho.norm();
    auto rho_zero = [&](int i) {
        return std::abs(rho(i)) <= tol::kDegeneracy * rscale;
    };
    std::vector<double> gammas;
    for (int i = 0; i < grid.gamma_samples; ++i) {
        gammas.push_back(-grid.gamma_range +
                         2.0 * grid.gamma_range * i /
                             std::max(1, grid.gamma_samples - 1));
    }
    if (distinct) {
        const double Jd[3] = {J1, J2, J3};
        for (int i = 0; i < 3; ++i) {
            if (!rho_zero(i)) continue;
            for (double g : gammas) {
                Vec3 pi;
                for (int j = 0; j < 3; ++j) {
                    pi(j) = (j == i) ? g : rho(j) / (Jd[j] - Jd[i]);
                }
                if (pi.norm() <= tol::kBalanced) continue;
                push_pair(out, p, pi, EquilibriumFamily::DegenerateDistinct, g,
                          0, i + 1);
            }
        }
    }

    // 7: axisymmetric inertia J1 = J2 != J3
    const bool axisym = std::abs(J1 - J2) <= tol::kDegeneracy * jscale &&
                        (J2 - J3) > tol::kDegeneracy * jscale;
    if (axisym) {
        if (rho_zero(0) && rho_zero(1)) {
            for (double g : gammas) {
                for (double d : gammas) {
                    Vec3 q(g, d, rho.z() / (J3 - J1));
                    if (q.norm() <= tol::kBalanced) continue;
                    push_pair(out, p, q, EquilibriumFamily::DegenerateAxisym, g,
                              d, 1);
                }
            }
        }
        if (rho_zero(2)) {
            for (double g : gammas) {
                Vec3 r(rho.x() / (J1 - J3), rho.y() / (J1 - J3), g);
                if (r.norm() <= tol::kBalanced) continue;
                push_pair(out, p, r, EquilibriumFamily::DegenerateAxisym, g, 0,
                          2);
            }
        }
    }
    return out;
}

std::vector<Equilibrium> enumerate_lr(const BodyParams& p,
                                      const EquilibriaGrid& grid) {
    // same attitudes; mu is already carried by every entry
    return enumerate_lp(p, grid);
}

} // namespace pend3d
