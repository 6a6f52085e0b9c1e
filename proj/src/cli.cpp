#include "pend3d/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "pend3d/linearization.hpp"
#include "pend3d/reduction.hpp"

namespace fs = std::filesystem;

namespace pend3d {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& tok, int line) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last) {
        throw ParseError("line " + std::to_string(line) + ": bad number '" +
                         tok + "'");
    }
    return v;
}

long to_long(const std::string& tok, int line) {
    long v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) {
        throw ParseError("line " + std::to_string(line) + ": bad integer '" +
                         tok + "'");
    }
    return v;
}

std::vector<double> to_doubles(const std::string& val, int line) {
    std::vector<double> out;
    std::istringstream ss(val);
    std::string tok;
    while (ss >> tok) out.push_back(to_double(tok, line));
    return out;
}

std::vector<double> to_doubles_n(const std::string& val, int line, size_t n) {
    auto out = to_doubles(val, line);
    if (out.size() != n) {
        throw ParseError("line " + std::to_string(line) + ": expected " +
                         std::to_string(n) + " numbers, got " +
                         std::to_string(out.size()));
    }
    return out;
}

bool to_bool(const std::string& val, int line) {
    if (val == "true" || val == "1") return true;
    if (val == "false" || val == "0") return false;
    throw ParseError("line " + std::to_string(line) + ": bad boolean '" + val +
                     "'");
}

std::string method_name(Method m) {
    switch (m) {
        case Method::Rk4Projected: return "rk4-projected";
        case Method::LieGroupRk2: return "liegroup-rk2";
        case Method::LieGroupRk4: return "liegroup-rk4";
    }
    return "";
}

Method method_from(const std::string& val, int line) {
    if (val == "rk4-projected") return Method::Rk4Projected;
    if (val == "liegroup-rk2") return Method::LieGroupRk2;
    if (val == "liegroup-rk4") return Method::LieGroupRk4;
    throw ParseError("line " + std::to_string(line) +
                     ": unknown integrator.method '" + val + "'");
}

// Reorders the body frame so the inertia diagonal is descending, using a
// determinant +1 signed permutation applied consistently to every
// body-frame quantity in the scenario.
void enforce_inertia_order(Scenario& s) {
    std::array<int, 3> idx = {0, 1, 2};
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        return s.J_diag(a) > s.J_diag(b);
    });
    if (idx == std::array<int, 3>{0, 1, 2}) return;

    Mat3 P = Mat3::Zero();
    for (int i = 0; i < 3; ++i) P(i, idx[i]) = 1.0;
    if (P.determinant() < 0) P.row(2) *= -1.0;

    s.J_diag = Vec3(s.J_diag(idx[0]), s.J_diag(idx[1]), s.J_diag(idx[2]));
    s.rho = P * s.rho;
    s.omega0 = P * s.omega0;
    s.omega_dir = P * s.omega_dir;
    s.R0 = s.R0 * P.transpose();
    s.warnings.push_back(
        "body.J reordered to a descending diagonal; rho and all body-frame "
        "initial data were permuted to match");
}

void validate(const Scenario& s) {
    static const std::vector<std::string> tasks = {
        "simulate", "equilibria", "linearize", "poincare", "reconstruct",
        "phase"};
    if (std::find(tasks.begin(), tasks.end(), s.task) == tasks.end()) {
        throw ValidationError("unknown task '" + s.task + "'");
    }
    if (s.model != "full" && s.model != "lp" && s.model != "lr") {
        throw ValidationError("model must be full, lp, or lr");
    }
    if (!(s.m > 0)) throw ValidationError("body.m must be positive");
    if (!(s.g > 0)) throw ValidationError("body.g must be positive");
    for (int i = 0; i < 3; ++i) {
        if (!(s.J_diag(i) > 0)) {
            throw ValidationError("body.J entries must be positive");
        }
    }
    if (s.rho.norm() == 0.0 && !s.balanced) {
        throw ValidationError("body.rho is zero; set body.balanced = true");
    }
    if (!(s.integrator.h > 0) || !(s.integrator.T >= s.integrator.h)) {
        throw ValidationError("integrator requires 0 < h <= T");
    }
    if (s.integrator.renormalize_every < 1) {
        throw ValidationError("integrator.renormalize_every must be >= 1");
    }
    if (s.quadrature != "trapezoid" && s.quadrature != "simpson") {
        throw ValidationError("phase.quadrature must be trapezoid or simpson");
    }
    if (s.phase_samples < 8) {
        throw ValidationError("phase.samples must be >= 8");
    }
}

} // namespace

BodyParams Scenario::body() const {
    return BodyParams(J_diag.asDiagonal(), m, g, rho, balanced);
}

bool Scenario::operator==(const Scenario& o) const {
    return task == o.task && J_diag == o.J_diag && m == o.m && g == o.g &&
           rho == o.rho && balanced == o.balanced && model == o.model &&
           R0 == o.R0 && omega0 == o.omega0 &&
           integrator.method == o.integrator.method &&
           integrator.h == o.integrator.h && integrator.T == o.integrator.T &&
           integrator.renormalize_every == o.integrator.renormalize_every &&
           grid.alpha_samples_per_interval ==
               o.grid.alpha_samples_per_interval &&
           grid.alpha_min_abs == o.grid.alpha_min_abs &&
           grid.alpha_max_abs == o.grid.alpha_max_abs &&
           grid.pole_clamp == o.grid.pole_clamp &&
           grid.gamma_samples == o.grid.gamma_samples &&
           grid.gamma_range == o.grid.gamma_range && energies == o.energies &&
           omega_dir == o.omega_dir &&
           crossing_tolerance == o.crossing_tolerance &&
           max_crossings == o.max_crossings &&
           phase_colatitude == o.phase_colatitude &&
           phase_samples == o.phase_samples && quadrature == o.quadrature &&
           seed == o.seed;
}

Scenario parse_config(const std::string& text) {
    Scenario s;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string stripped = trim(raw);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ParseError("line " + std::to_string(line) +
                             ": expected 'key = value'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string val = trim(stripped.substr(eq + 1));
        if (key.empty() || val.empty()) {
            throw ParseError("line " + std::to_string(line) +
                             ": empty key or value");
        }

        if (key == "task") {
            s.task = val;
        } else if (key == "body.J") {
            const auto v = to_doubles_n(val, line, 3);
            s.J_diag = Vec3(v[0], v[1], v[2]);
        } else if (key == "body.m") {
            s.m = to_double(val, line);
        } else if (key == "body.g") {
            s.g = to_double(val, line);
        } else if (key == "body.rho") {
            const auto v = to_doubles_n(val, line, 3);
            s.rho = Vec3(v[0], v[1], v[2]);
        } else if (key == "body.balanced") {
            s.balanced = to_bool(val, line);
        } else if (key == "model") {
            s.model = val;
        } else if (key == "initial.R") {
            const auto v = to_doubles_n(val, line, 9);
            Mat3 R;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) R(i, j) = v[3 * i + j];
            s.R0 = Rotation(R).matrix();
        } else if (key == "initial.omega") {
            const auto v = to_doubles_n(val, line, 3);
            s.omega0 = Vec3(v[0], v[1], v[2]);
        } else if (key == "integrator.method") {
            s.integrator.method = method_from(val, line);
        } else if (key == "integrator.h") {
            s.integrator.h = to_double(val, line);
        } else if (key == "integrator.T") {
            s.integrator.T = to_double(val, line);
        } else if (key == "integrator.renormalize_every") {
            s.integrator.renormalize_every =
                static_cast<int>(to_long(val, line));
        } else if (key == "grid.alpha_samples") {
            s.grid.alpha_samples_per_interval =
                static_cast<int>(to_long(val, line));
        } else if (key == "grid.alpha_min") {
            s.grid.alpha_min_abs = to_double(val, line);
        } else if (key == "grid.alpha_max") {
            s.grid.alpha_max_abs = to_double(val, line);
        } else if (key == "grid.pole_clamp") {
            s.grid.pole_clamp = to_double(val, line);
        } else if (key == "grid.gamma_samples") {
            s.grid.gamma_samples = static_cast<int>(to_long(val, line));
        } else if (key == "grid.gamma_range") {
            s.grid.gamma_range = to_double(val, line);
        } else if (key == "poincare.energies") {
            s.energies = to_doubles(val, line);
        } else if (key == "poincare.omega_dir") {
            const auto v = to_doubles_n(val, line, 3);
            s.omega_dir = Vec3(v[0], v[1], v[2]);
        } else if (key == "poincare.crossing_tolerance") {
            s.crossing_tolerance = to_double(val, line);
        } else if (key == "poincare.max_crossings") {
            s.max_crossings = static_cast<int>(to_long(val, line));
        } else if (key == "phase.colatitude") {
            s.phase_colatitude = to_double(val, line);
        } else if (key == "phase.samples") {
            s.phase_samples = static_cast<int>(to_long(val, line));
        } else if (key == "phase.quadrature") {
            s.quadrature = val;
        } else if (key == "seed") {
            s.seed = static_cast<std::uint64_t>(to_long(val, line));
        } else {
            throw ParseError("line " + std::to_string(line) +
                             ": unknown key '" + key + "'");
        }
    }
    enforce_inertia_order(s);
    validate(s);
    return s;
}

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    std::string out(buf);
    for (char& c : out) {
        if (c == ',') c = '.'; // defend against a stray locale
    }
    return out;
}

std::string render(const Scenario& s) {
    std::ostringstream out;
    auto vec = [](const Vec3& v) {
        return fmt17(v(0)) + " " + fmt17(v(1)) + " " + fmt17(v(2));
    };
    out << "task = " << s.task << "\n";
    out << "body.J = " << vec(s.J_diag) << "\n";
    out << "body.m = " << fmt17(s.m) << "\n";
    out << "body.g = " << fmt17(s.g) << "\n";
    out << "body.rho = " << vec(s.rho) << "\n";
    out << "body.balanced = " << (s.balanced ? "true" : "false") << "\n";
    out << "model = " << s.model << "\n";
    out << "initial.R =";
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out << " " << fmt17(s.R0(i, j));
    out << "\n";
    out << "initial.omega = " << vec(s.omega0) << "\n";
    out << "integrator.method = " << method_name(s.integrator.method) << "\n";
    out << "integrator.h = " << fmt17(s.integrator.h) << "\n";
    out << "integrator.T = " << fmt17(s.integrator.T) << "\n";
    out << "integrator.renormalize_every = " << s.integrator.renormalize_every
        << "\n";
    out << "grid.alpha_samples = " << s.grid.alpha_samples_per_interval << "\n";
    out << "grid.alpha_min = " << fmt17(s.grid.alpha_min_abs) << "\n";
    out << "grid.alpha_max = " << fmt17(s.grid.alpha_max_abs) << "\n";
    out << "grid.pole_clamp = " << fmt17(s.grid.pole_clamp) << "\n";
    out << "grid.gamma_samples = " << s.grid.gamma_samples << "\n";
    out << "grid.gamma_range = " << fmt17(s.grid.gamma_range) << "\n";
    if (!s.energies.empty()) {
        out << "poincare.energies =";
        for (double e : s.energies) out << " " << fmt17(e);
        out << "\n";
    }
    out << "poincare.omega_dir = " << vec(s.omega_dir) << "\n";
    out << "poincare.crossing_tolerance = " << fmt17(s.crossing_tolerance)
        << "\n";
    out << "poincare.max_crossings = " << s.max_crossings << "\n";
    out << "phase.colatitude = " << fmt17(s.phase_colatitude) << "\n";
    out << "phase.samples = " << s.phase_samples << "\n";
    out << "phase.quadrature = " << s.quadrature << "\n";
    out << "seed = " << s.seed << "\n";
    return out.str();
}

namespace {

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        out << content;
        if (!out) throw IoError("write failed for '" + tmp + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("rename to '" + path + "' failed: " + ec.message());
}

} // namespace

void emit_csv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream out;
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) out << ",";
        out << header[i];
    }
    out << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            out << row[i];
        }
        out << "\n";
    }
    write_atomic(path, out.str());
}

namespace {

std::string fmt2(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", x);
    std::string out(buf);
    for (char& c : out) {
        if (c == ',') c = '.';
    }
    return out;
}

} // namespace

void emit_svg(const std::string& path,
              const std::vector<std::pair<double, double>>& points,
              const std::string& xlabel, const std::string& ylabel,
              bool connect) {
    const int W = 640, H = 480, ML = 70, MR = 20, MT = 20, MB = 50;
    double xmin = -1, xmax = 1, ymin = -1, ymax = 1;
    if (!points.empty()) {
        xmin = xmax = points[0].first;
        ymin = ymax = points[0].second;
        for (const auto& [x, y] : points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
        const double px = std::max(1e-12, 0.05 * (xmax - xmin));
        const double py = std::max(1e-12, 0.05 * (ymax - ymin));
        xmin -= px;
        xmax += px;
        ymin -= py;
        ymax += py;
    }
    auto X = [&](double x) {
        return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR);
    };
    auto Y = [&](double y) {
        return H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB);
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
        << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H
        << "\">\n";
    out << "<rect width=\"" << W << "\" height=\"" << H
        << "\" fill=\"white\"/>\n";
    out << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR
        << "\" y2=\"" << H - MB << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML
        << "\" y2=\"" << H - MB << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"" << H - 12
        << "\" text-anchor=\"middle\" font-size=\"14\">" << xlabel
        << "</text>\n";
    out << "<text x=\"16\" y=\"" << (MT + H - MB) / 2
        << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 "
           "16 "
        << (MT + H - MB) / 2 << ")\">" << ylabel << "</text>\n";
    out << "<text x=\"" << ML << "\" y=\"" << H - MB + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt2(xmin)
        << "</text>\n";
    out << "<text x=\"" << W - MR << "\" y=\"" << H - MB + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt2(xmax)
        << "</text>\n";
    out << "<text x=\"" << ML - 6 << "\" y=\"" << H - MB
        << "\" text-anchor=\"end\" font-size=\"11\">" << fmt2(ymin)
        << "</text>\n";
    out << "<text x=\"" << ML - 6 << "\" y=\"" << MT + 10
        << "\" text-anchor=\"end\" font-size=\"11\">" << fmt2(ymax)
        << "</text>\n";
    if (connect && points.size() > 1) {
        out << "<polyline fill=\"none\" stroke=\"steelblue\" "
               "stroke-width=\"1\" points=\"";
        for (const auto& [x, y] : points) {
            out << fmt2(X(x)) << "," << fmt2(Y(y)) << " ";
        }
        out << "\"/>\n";
    } else {
        for (const auto& [x, y] : points) {
            out << "<circle cx=\"" << fmt2(X(x)) << "\" cy=\"" << fmt2(Y(y))
                << "\" r=\"1.5\" fill=\"steelblue\"/>\n";
        }
    }
    out << "</svg>\n";
    write_atomic(path, out.str());
}

namespace {

const std::vector<std::string> kTrajectoryHeader = {
    "t",  "R11",    "R12",    "R13",    "R21", "R22",
    "R23", "R31",    "R32",    "R33",    "w1",  "w2",
    "w3",  "Gamma1", "Gamma2", "Gamma3", "E",   "h_momentum"};

std::vector<std::string> trajectory_row(double t, const Mat3* R, const Vec3* w,
                                        const Vec3& gamma, double E, double h) {
    std::vector<std::string> row;
    row.reserve(18);
    row.push_back(fmt17(t));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            row.push_back(R ? fmt17((*R)(i, j)) : std::string());
    for (int i = 0; i < 3; ++i)
        row.push_back(w ? fmt17((*w)(i)) : std::string());
    for (int i = 0; i < 3; ++i) row.push_back(fmt17(gamma(i)));
    row.push_back(fmt17(E));
    row.push_back(fmt17(h));
    return row;
}

void run_simulate(const Scenario& s, const BodyParams& p,
                  const std::string& dir) {
    auto [full0, lp0, lr0] = build_initial(p, Rotation(s.R0), s.omega0);
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<double, double>> drift;
    if (s.model == "full") {
        const auto traj = integrate_full(p, full0, s.integrator);
        for (const auto& a : traj) {
            const Vec3 gamma = a.R.transpose() * Vec3::UnitZ();
            rows.push_back(
                trajectory_row(a.t, &a.R, &a.omega, gamma, a.E, a.h_momentum));
            drift.emplace_back(a.t, a.E - traj.front().E);
        }
    } else if (s.model == "lp") {
        const auto traj = integrate_lp(p, lp0, s.integrator);
        for (const auto& a : traj) {
            rows.push_back(trajectory_row(a.t, nullptr, &a.omega, a.gamma, a.E,
                                          a.h_momentum));
            drift.emplace_back(a.t, a.E - traj.front().E);
        }
    } else {
        const auto traj = integrate_lr(p, lr0, s.integrator);
        for (const auto& a : traj) {
            rows.push_back(
                trajectory_row(a.t, nullptr, nullptr, a.gamma, a.E, a.mu));
            drift.emplace_back(a.t, a.E - traj.front().E);
        }
    }
    emit_csv(dir + "/trajectory.csv", kTrajectoryHeader, rows);
    emit_svg(dir + "/energy_drift.svg", drift, "t", "E(t) - E(0)", true);
}

void run_equilibria(const Scenario& s, const BodyParams& p,
                    const std::string& dir) {
    const auto eqs = enumerate_lr(p, s.grid);
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<double, double>> pts;
    for (const auto& e : eqs) {
        rows.push_back({family_name(e.family), fmt17(e.alpha),
                        fmt17(e.gamma_e(0)), fmt17(e.gamma_e(1)),
                        fmt17(e.gamma_e(2)), fmt17(e.omega_e(0)),
                        fmt17(e.omega_e(1)), fmt17(e.omega_e(2)), fmt17(e.mu),
                        fmt17(e.residual)});
        pts.emplace_back(e.gamma_e(0), e.gamma_e(1));
    }
    emit_csv(dir + "/equilibria.csv",
             {"family", "alpha", "gamma_e_1", "gamma_e_2", "gamma_e_3",
              "omega_e_1", "omega_e_2", "omega_e_3", "mu", "residual"},
             rows);
    emit_svg(dir + "/equilibria.svg", pts, "Gamma1", "Gamma2", false);
}

void run_linearize(const Scenario& s, const BodyParams& p,
                   const std::string& dir) {
    (void)s;
    std::vector<std::vector<std::string>> rows;
    const std::pair<ModelTag, std::string> models[] = {
        {ModelTag::Full, "full"}, {ModelTag::LP, "lp"}, {ModelTag::LR, "lr"}};
    const std::pair<EquilibriumSide, std::string> sides[] = {
        {EquilibriumSide::Hanging, "hanging"},
        {EquilibriumSide::Inverted, "inverted"}};
    for (const auto& [side, sname] : sides) {
        for (const auto& [model, mname] : models) {
            const LinearModel lm = linearize(p, side, model);
            std::string verdict;
            switch (lm.verdict) {
                case StabilityVerdict::LyapunovStableCandidate:
                    verdict = "lyapunov-stable-candidate";
                    break;
                case StabilityVerdict::Unstable: verdict = "unstable"; break;
                case StabilityVerdict::Inconclusive:
                    verdict = "inconclusive";
                    break;
            }
            for (size_t i = 0; i < lm.eigenvalues.size(); ++i) {
                rows.push_back({mname, sname, std::to_string(i),
                                fmt17(lm.eigenvalues[i].real()),
                                fmt17(lm.eigenvalues[i].imag()), verdict});
            }
        }
    }
    emit_csv(dir + "/linearize.csv",
             {"model", "side", "index", "eig_re", "eig_im", "verdict"}, rows);
}

int thread_cap() {
    if (const char* env = std::getenv("PEND3D_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<int>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

void run_poincare(const Scenario& s, const BodyParams& p,
                  const std::string& dir) {
    if (s.energies.empty()) {
        throw ValidationError("poincare.energies must be non-empty");
    }
    const Vec3 gamma0 = s.R0.transpose() * Vec3::UnitZ();
    const double v0 = p.m() * p.g() * p.rho().dot(gamma0);
    const double kin = 0.5 * s.omega_dir.dot(p.J() * s.omega_dir);

    const size_t n = s.energies.size();
    std::vector<std::vector<PoincarePoint>> results(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (size_t k = next.fetch_add(1); k < n; k = next.fetch_add(1)) {
            try {
                const double E = s.energies[k];
                const double c2 = (E + v0) / kin;
                if (!(c2 >= 0)) {
                    throw EmptySection(
                        "poincare: energy " + fmt17(E) +
                        " is unreachable along the given omega direction");
                }
                auto [f0, l0, r0] =
                    build_initial(p, Rotation(s.R0), std::sqrt(c2) * s.omega_dir);
                (void)f0;
                (void)l0;
                PoincareSection section;
                section.E = E;
                section.mu = r0.mu;
                section.crossing_tolerance = s.crossing_tolerance;
                section.max_crossings = s.max_crossings;
                results[k] = poincare_map(p, r0, section, s.integrator);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const int nthreads = std::min<int>(thread_cap(), static_cast<int>(n));
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (size_t k = 0; k < n; ++k) {
        if (errors[k]) std::rethrow_exception(errors[k]);
    }

    for (size_t k = 0; k < n; ++k) {
        std::vector<std::vector<std::string>> rows;
        std::vector<std::pair<double, double>> pts;
        for (const auto& pt : results[k]) {
            rows.push_back({fmt17(pt.t), fmt17(pt.u), fmt17(pt.v),
                            std::to_string(pt.sign_gamma3),
                            fmt17(pt.energy_error), fmt17(pt.g_residual)});
            pts.emplace_back(pt.u, pt.v);
        }
        const std::string stem = dir + "/poincare_" + std::to_string(k + 1);
        emit_csv(stem + ".csv",
                 {"t", "u", "v", "sign_Gamma3", "E_err", "g_residual"}, rows);
        emit_svg(stem + ".svg", pts, "Gamma1", "Gamma2", false);
    }
}

void run_reconstruct(const Scenario& s, const BodyParams& p,
                     const std::string& dir) {
    auto [full0, lp0, lr0] = build_initial(p, Rotation(s.R0), s.omega0);
    (void)lp0;
    const auto lr_traj = integrate_lr(p, lr0, s.integrator);

    ReducedTrajectory red;
    red.mu = lr0.mu;
    for (const auto& a : lr_traj) {
        red.t.push_back(a.t);
        red.gamma.push_back(a.gamma);
        red.gammadot.push_back(a.gammadot);
    }
    const Quadrature quad = s.quadrature == "simpson" ? Quadrature::Simpson
                                                      : Quadrature::Trapezoid;
    const auto rec = reconstruct(p, red, full0.R, quad);

    std::vector<std::vector<std::string>> rows;
    for (size_t k = 0; k < rec.t.size(); ++k) {
        const Vec3 gamma = rec.R[k].transpose() * Vec3::UnitZ();
        FullState st{Rotation::project(rec.R[k]), rec.omega[k]};
        rows.push_back(trajectory_row(rec.t[k], &rec.R[k], &rec.omega[k],
                                      gamma, energy_full(p, st),
                                      momentum_h(p, st)));
    }
    emit_csv(dir + "/reconstructed.csv", kTrajectoryHeader, rows);
}

void run_phase(const Scenario& s, const BodyParams& p, const std::string& dir) {
    const int n = s.phase_samples;
    const double th = s.phase_colatitude;
    ReducedTrajectory loop;
    loop.mu = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double phi = 2.0 * M_PI * k / n;
        loop.t.push_back(phi);
        loop.gamma.push_back(Vec3(std::sin(th) * std::cos(phi),
                                  std::sin(th) * std::sin(phi), std::cos(th)));
        loop.gammadot.push_back(Vec3(-std::sin(th) * std::sin(phi),
                                     std::sin(th) * std::cos(phi), 0.0));
    }
    loop.gamma.back() = loop.gamma.front();
    loop.gammadot.back() = loop.gammadot.front();

    const double surf = geometric_phase_surface(p, loop.gamma);
    const PhaseResult rec = geometric_phase_reconstruct(p, loop);

    emit_csv(dir + "/phase.csv", {"method", "theta_geo", "winding"},
             {{"surface", fmt17(surf), ""},
              {"reconstruct", fmt17(rec.total()),
               std::to_string(rec.winding)}});
}

} // namespace

int run(const Scenario& s, const std::string& out_dir) {
    try {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec) {
            throw IoError("cannot create output directory '" + out_dir +
                          "': " + ec.message());
        }
        const BodyParams p = s.body();
        if (s.task == "simulate") {
            run_simulate(s, p, out_dir);
        } else if (s.task == "equilibria") {
            run_equilibria(s, p, out_dir);
        } else if (s.task == "linearize") {
            run_linearize(s, p, out_dir);
        } else if (s.task == "poincare") {
            run_poincare(s, p, out_dir);
        } else if (s.task == "reconstruct") {
            run_reconstruct(s, p, out_dir);
        } else if (s.task == "phase") {
            run_phase(s, p, out_dir);
        } else {
            throw ValidationError("unknown task '" + s.task + "'");
        }
        return 0;
    } catch (const IoError& e) {
        std::fprintf(stderr, "pend3d: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "pend3d: %s\n", e.what());
        return 1;
    }
}

} // namespace pend3d
