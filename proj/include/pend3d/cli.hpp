#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pend3d/dynamics.hpp"
#include "pend3d/equilibria.hpp"
#include "pend3d/integrate.hpp"

namespace pend3d {

/// A fully resolved batch job: body, task selector, and every task-specific
/// knob with its default applied. Plain data so scenarios compare, render,
/// and re-parse exactly.
struct Scenario {
    std::string task = "simulate";

    Vec3 J_diag = Vec3(0.13, 0.28, 0.17);
    double m = 1.0;
    double g = 9.81;
    Vec3 rho = Vec3(0.0, 0.0, 0.3);
    bool balanced = false;

    std::string model = "full"; // full | lp | lr
    Mat3 R0 = Mat3::Identity();
    Vec3 omega0 = Vec3::Zero();

    IntegratorConfig integrator;

    EquilibriaGrid grid;

    std::vector<double> energies; // poincare task
    Vec3 omega_dir = Vec3(1.0, 1.0, 1.0);
    double crossing_tolerance = 1e-10;
    int max_crossings = 2000;

    double phase_colatitude = 0.5; // phase task, radians
    int phase_samples = 512;
    std::string quadrature = "trapezoid"; // trapezoid | simpson

    std::uint64_t seed = 0;
    std::vector<std::string> warnings; // not compared, not rendered

    BodyParams body() const;
    bool operator==(const Scenario& o) const;
};

/// Parses the flat `key = value` config dialect. Comments start at `#`.
/// Throws ParseError (with line number) or ValidationError.
Scenario parse_config(const std::string& text);

/// Inverse of parse_config up to defaults: parse_config(render(s)) == s.
std::string render(const Scenario& s);

/// Executes the scenario, writing outputs under out_dir.
/// Returns 0 on success, 1 on numerical failure, 2 on I/O failure.
int run(const Scenario& s, const std::string& out_dir);

/// Fixed-format floating-point cell: 17 significant digits, '.' separator.
std::string fmt17(double x);

/// Atomic CSV writer (temp file + rename). Cells are preformatted.
void emit_csv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows);

/// Static SVG scatter or polyline plot with axes and labels.
void emit_svg(const std::string& path,
              const std::vector<std::pair<double, double>>& points,
              const std::string& xlabel, const std::string& ylabel,
              bool connect);

} // namespace pend3d
