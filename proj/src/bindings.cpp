#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pend3d/cli.hpp"
#include "pend3d/equilibria.hpp"
#include "pend3d/integrate.hpp"
#include "pend3d/linearization.hpp"
#include "pend3d/reduction.hpp"

namespace py = pybind11;
using namespace pend3d;

PYBIND11_MODULE(_pend3d, m) {
    m.doc() = "3D pendulum dynamics, reduction, and analysis";

    py::register_exception<Error>(m, "Pend3dError");

    py::class_<BodyParams>(m, "BodyParams")
        .def(py::init<const Mat3&, double, double, const Vec3&, bool>(),
             py::arg("J"), py::arg("m"), py::arg("g"), py::arg("rho"),
             py::arg("balanced") = false)
        .def_property_readonly("J", &BodyParams::J)
        .def_property_readonly("m", &BodyParams::m)
        .def_property_readonly("g", &BodyParams::g)
        .def_property_readonly("rho", &BodyParams::rho);

    py::class_<Rotation>(m, "Rotation")
        .def(py::init<>())
        .def(py::init<const Mat3&>())
        .def_static("project", &Rotation::project)
        .def_property_readonly("matrix", &Rotation::matrix);

    py::class_<FullState>(m, "FullState")
        .def(py::init([](const Mat3& R, const Vec3& w) {
                 return FullState{Rotation(R), w};
             }),
             py::arg("R"), py::arg("omega"))
        .def_property_readonly("R",
                               [](const FullState& s) { return s.R.matrix(); })
        .def_readonly("omega", &FullState::omega);

    py::class_<LPState>(m, "LPState")
        .def(py::init<const Vec3&, const Vec3&>(), py::arg("gamma"),
             py::arg("omega"))
        .def_readonly("gamma", &LPState::gamma)
        .def_readonly("omega", &LPState::omega);

    py::class_<LRState>(m, "LRState")
        .def(py::init<const Vec3&, const Vec3&, double>(), py::arg("gamma"),
             py::arg("gammadot"), py::arg("mu"))
        .def_readonly("gamma", &LRState::gamma)
        .def_readonly("gammadot", &LRState::gammadot)
        .def_readonly("mu", &LRState::mu);

    m.def("hat", &hat);
    m.def("vee", &vee);
    m.def("exp_so3",
          [](const Vec3& a) { return exp_so3(a).matrix(); });

    m.def("rhs_full", &rhs_full);
    m.def("rhs_lp", &rhs_lp);
    m.def("rhs_lr", &rhs_lr);

    m.def("energy_full", &energy_full);
    m.def("momentum_h", &momentum_h);
    m.def("energy_lp", &energy_lp);
    m.def("energy_lr", &energy_lr);
    m.def("momentum_map", &momentum_map);
    m.def("locked_inertia", &locked_inertia);
    m.def("mechanical_connection", &mechanical_connection);
    m.def("routhian", &routhian);

    py::class_<Equilibrium>(m, "Equilibrium")
        .def_readonly("gamma_e", &Equilibrium::gamma_e)
        .def_readonly("omega_e", &Equilibrium::omega_e)
        .def_readonly("mu", &Equilibrium::mu)
        .def_property_readonly(
            "family",
            [](const Equilibrium& e) { return family_name(e.family); })
        .def_readonly("alpha", &Equilibrium::alpha)
        .def_readonly("residual", &Equilibrium::residual);

    py::class_<EquilibriaGrid>(m, "EquilibriaGrid")
        .def(py::init<>())
        .def_readwrite("alpha_samples_per_interval",
                       &EquilibriaGrid::alpha_samples_per_interval)
        .def_readwrite("pole_clamp", &EquilibriaGrid::pole_clamp);

    m.def("enumerate_lp", &enumerate_lp, py::arg("p"),
          py::arg("grid") = EquilibriaGrid{});
    m.def("enumerate_lr", &enumerate_lr, py::arg("p"),
          py::arg("grid") = EquilibriaGrid{});

    py::enum_<ModelTag>(m, "ModelTag")
        .value("Full", ModelTag::Full)
        .value("LP", ModelTag::LP)
        .value("LR", ModelTag::LR);
    py::enum_<EquilibriumSide>(m, "EquilibriumSide")
        .value("Hanging", EquilibriumSide::Hanging)
        .value("Inverted", EquilibriumSide::Inverted);
    py::enum_<StabilityVerdict>(m, "StabilityVerdict")
        .value("LyapunovStableCandidate",
               StabilityVerdict::LyapunovStableCandidate)
        .value("Unstable", StabilityVerdict::Unstable)
        .value("Inconclusive", StabilityVerdict::Inconclusive);

    py::class_<LinearModel>(m, "LinearModel")
        .def_readonly("A", &LinearModel::A)
        .def_readonly("eigenvalues", &LinearModel::eigenvalues)
        .def_readonly("verdict", &LinearModel::verdict);
    m.def("linearize", &linearize);

    py::enum_<Method>(m, "Method")
        .value("Rk4Projected", Method::Rk4Projected)
        .value("LieGroupRk2", Method::LieGroupRk2)
        .value("LieGroupRk4", Method::LieGroupRk4);

    py::class_<IntegratorConfig>(m, "IntegratorConfig")
        .def(py::init<>())
        .def_readwrite("method", &IntegratorConfig::method)
        .def_readwrite("h", &IntegratorConfig::h)
        .def_readwrite("T", &IntegratorConfig::T)
        .def_readwrite("renormalize_every",
                       &IntegratorConfig::renormalize_every);

    py::class_<FullSample>(m, "FullSample")
        .def_readonly("t", &FullSample::t)
        .def_readonly("R", &FullSample::R)
        .def_readonly("omega", &FullSample::omega)
        .def_readonly("E", &FullSample::E)
        .def_readonly("h_momentum", &FullSample::h_momentum);
    py::class_<LPSample>(m, "LPSample")
        .def_readonly("t", &LPSample::t)
        .def_readonly("gamma", &LPSample::gamma)
        .def_readonly("omega", &LPSample::omega)
        .def_readonly("E", &LPSample::E)
        .def_readonly("h_momentum", &LPSample::h_momentum);
    py::class_<LRSample>(m, "LRSample")
        .def_readonly("t", &LRSample::t)
        .def_readonly("gamma", &LRSample::gamma)
        .def_readonly("gammadot", &LRSample::gammadot)
        .def_readonly("E", &LRSample::E)
        .def_readonly("mu", &LRSample::mu);

    m.def("integrate_full", &integrate_full);
    m.def("integrate_lp", &integrate_lp);
    m.def("integrate_lr", &integrate_lr);
    m.def("build_initial", &build_initial);

    py::class_<PoincareSection>(m, "PoincareSection")
        .def(py::init<>())
        .def_readwrite("E", &PoincareSection::E)
        .def_readwrite("mu", &PoincareSection::mu)
        .def_readwrite("crossing_tolerance",
                       &PoincareSection::crossing_tolerance)
        .def_readwrite("max_crossings", &PoincareSection::max_crossings);
    py::class_<PoincarePoint>(m, "PoincarePoint")
        .def_readonly("gamma", &PoincarePoint::gamma)
        .def_readonly("t", &PoincarePoint::t)
        .def_readonly("u", &PoincarePoint::u)
        .def_readonly("v", &PoincarePoint::v)
        .def_readonly("sign_gamma3", &PoincarePoint::sign_gamma3)
        .def_readonly("energy_error", &PoincarePoint::energy_error)
        .def_readonly("g_residual", &PoincarePoint::g_residual);
    m.def("poincare_map", &poincare_map);

    py::class_<ReducedTrajectory>(m, "ReducedTrajectory")
        .def(py::init<>())
        .def_readwrite("t", &ReducedTrajectory::t)
        .def_readwrite("gamma", &ReducedTrajectory::gamma)
        .def_readwrite("gammadot", &ReducedTrajectory::gammadot)
        .def_readwrite("mu", &ReducedTrajectory::mu);
    py::class_<ReconstructedTrajectory>(m, "ReconstructedTrajectory")
        .def_readonly("t", &ReconstructedTrajectory::t)
        .def_readonly("R", &ReconstructedTrajectory::R)
        .def_readonly("R_hor", &ReconstructedTrajectory::R_hor)
        .def_readonly("omega", &ReconstructedTrajectory::omega)
        .def_readonly("theta_dyn", &ReconstructedTrajectory::theta_dyn);
    py::enum_<Quadrature>(m, "Quadrature")
        .value("Trapezoid", Quadrature::Trapezoid)
        .value("Simpson", Quadrature::Simpson);
    m.def("reconstruct", &reconstruct, py::arg("p"), py::arg("traj"),
          py::arg("R0"), py::arg("quad") = Quadrature::Trapezoid);
    m.def("geometric_phase_surface", &geometric_phase_surface);
    py::class_<PhaseResult>(m, "PhaseResult")
        .def_readonly("wrapped", &PhaseResult::wrapped)
        .def_readonly("winding", &PhaseResult::winding)
        .def("total", &PhaseResult::total);
    m.def("geometric_phase_reconstruct", &geometric_phase_reconstruct);

    m.def("parse_config", &parse_config);
    m.def("render_config", &render);
    m.def("run_scenario", &run, py::arg("scenario"), py::arg("out_dir"));
    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("task", &Scenario::task)
        .def_readwrite("model", &Scenario::model)
        .def_readwrite("energies", &Scenario::energies);
}
