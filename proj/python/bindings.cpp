#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "horoperiod/classifier.hpp"
#include "horoperiod/orbit_engine.hpp"
#include "horoperiod/period_engine.hpp"
#include "horoperiod/scalar_kernel.hpp"

namespace py = pybind11;
using namespace horo;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Period function, periodic solutions and classification for the horospherical p-Minkowski problem";

    static py::exception<Error> error_type(m, "HoroperiodError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr ptr) {
        try {
            if (ptr) std::rethrow_exception(ptr);
        } catch (const Error& e) {
            py::object inst = py::reinterpret_borrow<py::object>(error_type.ptr())(e.what());
            inst.attr("kind") = std::string(to_string(e.kind()));
            PyErr_SetObject(error_type.ptr(), inst.ptr());
        }
    });

    py::class_<ProblemParams>(m, "ProblemParams")
        .def(py::init([](double p, double q, double gamma) { return ProblemParams{p, q, gamma}; }), py::arg("p"),
             py::arg("q") = 1.0, py::arg("gamma") = 1.0)
        .def_readwrite("p", &ProblemParams::p)
        .def_readwrite("q", &ProblemParams::q)
        .def_readwrite("gamma", &ProblemParams::gamma)
        .def("__repr__", [](const ProblemParams& pr) {
            return "ProblemParams(p=" + std::to_string(pr.p) + ", q=" + std::to_string(pr.q) +
                   ", gamma=" + std::to_string(pr.gamma) + ")";
        });

    py::class_<CriticalData>(m, "CriticalData")
        .def_readonly("u_gamma", &CriticalData::u_gamma)
        .def_readonly("e_star", &CriticalData::e_star);
    py::class_<TurningPoints>(m, "TurningPoints")
        .def_readonly("u_minus", &TurningPoints::u_minus)
        .def_readonly("u_plus", &TurningPoints::u_plus);
    py::class_<ShapeCoords>(m, "ShapeCoords")
        .def(py::init([](double alpha, double r) { return ShapeCoords{alpha, r}; }), py::arg("alpha"), py::arg("r"))
        .def_readwrite("alpha", &ShapeCoords::alpha)
        .def_readwrite("r", &ShapeCoords::r);
    py::class_<ConstantSolutions>(m, "ConstantSolutions")
        .def_readonly("roots", &ConstantSolutions::roots)
        .def_readonly("gamma_threshold", &ConstantSolutions::gamma_threshold);
    py::class_<PeriodValue>(m, "PeriodValue")
        .def_readonly("value", &PeriodValue::value)
        .def_readonly("error_estimate", &PeriodValue::error_estimate)
        .def_readonly("nodes_used", &PeriodValue::nodes_used);

    m.def("critical_point", [](const ProblemParams& pr) { return critical_point(pr); }, py::arg("params"));
    m.def("turning_points", [](const ProblemParams& pr, double e) { return turning_points(pr, e); },
          py::arg("params"), py::arg("energy"));
    m.def("shape_from_turning", &shape_from_turning, py::arg("turning"));
    m.def("constant_solutions", [](const ProblemParams& pr) { return constant_solutions(pr); }, py::arg("params"));
    m.def("period_energy",
          [](const ProblemParams& pr, double e, double tol) {
              QuadratureConfig cfg;
              cfg.target_tol = tol;
              return period_energy(pr, e, cfg);
          },
          py::arg("params"), py::arg("energy"), py::arg("tol") = QuadratureConfig{}.target_tol);
    m.def("period_shape",
          [](double p, double q, double alpha, double r, double tol) {
              QuadratureConfig cfg;
              cfg.target_tol = tol;
              return period_shape(p, q, {alpha, r}, cfg);
          },
          py::arg("p"), py::arg("q"), py::arg("alpha"), py::arg("r"), py::arg("tol") = QuadratureConfig{}.target_tol);

    py::class_<OrbitProfile>(m, "OrbitProfile")
        .def_readonly("energy", &OrbitProfile::energy)
        .def_readonly("tau", &OrbitProfile::tau)
        .def_readonly("u", &OrbitProfile::u)
        .def_readonly("u_tau", &OrbitProfile::u_tau)
        .def_readonly("max_drift", &OrbitProfile::max_drift)
        .def_readonly("equilibrium", &OrbitProfile::equilibrium);
    m.def("integrate_orbit", [](const ProblemParams& pr, double e, double duration) {
        return integrate_orbit(pr, e, duration);
    }, py::arg("params"), py::arg("energy"), py::arg("duration"));
    m.def("measure_half_period", [](const OrbitProfile& o) { return measure_half_period(o); }, py::arg("orbit"));

    py::class_<SolutionProfile>(m, "SolutionProfile")
        .def_readonly("params", &SolutionProfile::params)
        .def_readonly("energy", &SolutionProfile::energy)
        .def_readonly("m", &SolutionProfile::m)
        .def_readonly("theta", &SolutionProfile::theta)
        .def_readonly("phi", &SolutionProfile::phi)
        .def_readonly("half_period", &SolutionProfile::half_period)
        .def_readonly("residual_max", &SolutionProfile::residual_max)
        .def_readonly("residual_bracket", &SolutionProfile::residual_bracket)
        .def_readonly("hconvex_min", &SolutionProfile::hconvex_min)
        .def_readonly("hk_value", &SolutionProfile::hk_value)
        .def_readonly("symmetry_error", &SolutionProfile::symmetry_error);
    m.def("build_solution", [](const ProblemParams& pr, double e, int fold, int grid_size) {
        SolutionConfig cfg;
        cfg.grid_size = grid_size;
        return build_solution(pr, e, fold, cfg);
    }, py::arg("params"), py::arg("energy"), py::arg("m"), py::arg("grid_size") = SolutionConfig{}.grid_size);
    m.def("certify_profile", &certify_profile, py::arg("params"), py::arg("phi"), py::arg("m"),
          py::arg("energy") = 0.0);

    m.def("threshold_gamma", &threshold_gamma, py::arg("p"), py::arg("l"));
    m.def("threshold_gamma_weighted", &threshold_gamma_weighted, py::arg("p"), py::arg("q"), py::arg("l"));

    py::class_<Branch>(m, "Branch")
        .def_readonly("m", &Branch::m)
        .def_readonly("energy", &Branch::energy)
        .def_readonly("theta_check", &Branch::theta_check);
    py::class_<ClassificationReport>(m, "ClassificationReport")
        .def_readonly("params", &ClassificationReport::params)
        .def_readonly("constant_roots", &ClassificationReport::constant_roots)
        .def_readonly("branches", &ClassificationReport::branches)
        .def_readonly("infinite_family", &ClassificationReport::infinite_family)
        .def_readonly("lower_bound_count", &ClassificationReport::lower_bound_count)
        .def_readonly("scan_complete", &ClassificationReport::scan_complete)
        .def_readonly("scanned", &ClassificationReport::scanned)
        .def_readonly("theta_min", &ClassificationReport::theta_min)
        .def_readonly("theta_max", &ClassificationReport::theta_max);
    m.def("count_solutions", [](const ProblemParams& pr, int m_max) { return count_solutions(pr, m_max); },
          py::arg("params"), py::arg("m_max") = 8);

    py::class_<ScanRecord>(m, "ScanRecord")
        .def_readonly("index", &ScanRecord::index)
        .def_readonly("params", &ScanRecord::params)
        .def_readonly("constant_count", &ScanRecord::constant_count)
        .def_readonly("branch_count", &ScanRecord::branch_count)
        .def_readonly("infinite_family", &ScanRecord::infinite_family)
        .def_readonly("thresholds_crossed", &ScanRecord::thresholds_crossed)
        .def_readonly("status", &ScanRecord::status)
        .def_readonly("detail", &ScanRecord::detail);
    m.def("region_scan",
          [](const std::vector<double>& ps, const std::vector<double>& qs, const std::vector<double>& gs, int m_max,
             int workers) {
              py::gil_scoped_release release;
              return region_scan(ps, qs, gs, m_max, {}, workers);
          },
          py::arg("p_grid"), py::arg("q_grid"), py::arg("gamma_grid"), py::arg("m_max") = 8, py::arg("workers") = 1);
}
