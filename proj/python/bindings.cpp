#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "henon/cli.hpp"
#include "henon/continuation.hpp"
#include "henon/spectrum.hpp"

namespace py = pybind11;
using namespace henon;

namespace {

py::dict eigenpair_dict(const Eigenpair& e) {
    py::dict d;
    d["value"] = e.value;
    d["parity"] = to_string(e.parity);
    d["sign_changes"] = e.sign_changes;
    d["radial_sign_changes"] = e.radial_sign_changes;
    d["zero_mode"] = e.zero_mode;
    d["discrete"] = e.discrete;
    d["vector"] = e.vector;
    return d;
}

py::dict spectrum_summary(const Params& params, const LogGrid& grid, int k, double quad_tol) {
    const OperatorMatrix op = assemble_T(params, grid, quad_tol);
    const GroundState gs = solve_ground_state(op);
    SpectrumOptions opts;
    opts.k = k;
    const SpectrumReport report = parity_spectrum(assemble_linearized(op, gs.profile.values, params.p), opts);
    py::list even, odd;
    for (const auto& e : report.even) even.append(eigenpair_dict(e));
    for (const auto& e : report.odd) odd.append(eigenpair_dict(e));
    py::dict d;
    d["Q"] = gs.profile.values;
    d["essential_edge"] = report.essential_edge;
    d["zero_tol"] = report.zero_tol;
    d["morse_index"] = report.morse_index_full;
    d["morse_index_even"] = report.morse_index_even;
    d["morse_indeterminate"] = report.morse_indeterminate;
    d["even"] = even;
    d["odd"] = odd;
    return d;
}

py::dict branch_summary(int N, double p, double s0, double s_end, const LogGrid& grid, double ds_max) {
    ContinuationOptions opts;
    opts.ds_max = ds_max;
    const Branch b = continue_branch(N, p, s0, s_end, grid, opts);
    py::list points;
    for (const auto& pt : b.points) {
        py::dict d;
        d["s"] = pt.s;
        d["Q"] = pt.Q.values;
        d["morse_index_even"] = pt.morse_index_even;
        d["residual"] = pt.residual;
        d["sup_norm"] = pt.sup_norm;
        d["min_value"] = pt.min_value;
        d["newton_iters"] = pt.newton_iters;
        points.append(d);
    }
    py::list probes;
    for (const auto& pr : b.probes) probes.append(py::make_tuple(pr.s, pr.distance, pr.newton_iters));
    py::dict d;
    d["points"] = points;
    d["sup_bound"] = b.sup_bound;
    d["reached_end"] = b.reached_end;
    d["s_star"] = b.s_star;
    d["probes"] = probes;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    py::register_exception<ParamsError>(m, "ParamsError", PyExc_ValueError);
    py::register_exception<SolveError>(m, "SolveError", PyExc_RuntimeError);
    py::register_exception<MonitorViolation>(m, "MonitorViolation", PyExc_RuntimeError);

    py::class_<Params>(m, "Params")
        .def(py::init([](int N, double s, double alpha, std::optional<double> p) {
                 return p ? Params::make(N, s, alpha, *p) : Params::make(N, s, alpha);
             }),
             py::arg("N"), py::arg("s"), py::arg("alpha") = 0.0, py::arg("p") = py::none())
        .def_readonly("N", &Params::N)
        .def_readonly("s", &Params::s)
        .def_readonly("alpha", &Params::alpha)
        .def_readonly("p", &Params::p)
        .def("decay_rate", &Params::decay_rate)
        .def("__repr__", &Params::describe);

    py::class_<LogGrid>(m, "LogGrid")
        .def(py::init<double, std::size_t>(), py::arg("L"), py::arg("M"))
        .def_property_readonly("L", &LogGrid::half_width)
        .def_property_readonly("M", &LogGrid::size)
        .def_property_readonly("h", &LogGrid::spacing)
        .def("nodes", &LogGrid::nodes)
        .def("refined", &LogGrid::refined);

    m.def("critical_exponent", py::overload_cast<int, double, double>(&critical_exponent), py::arg("N"),
          py::arg("s"), py::arg("alpha"));
    m.def("hardy_constant", &hardy_constant, py::arg("N"), py::arg("s"));
    m.def("power_symbol", &power_symbol, py::arg("N"), py::arg("s"), py::arg("mu"));
    m.def("normalization_constant", &normalization_constant, py::arg("N"), py::arg("s"));
    m.def("A_via_integral", &A_via_integral, py::arg("params"), py::arg("tol") = 1e-10);
    m.def("kernel_value", &kernel_value, py::arg("params"), py::arg("t"), py::arg("tol") = 1e-12);

    m.def(
        "assemble_T",
        [](const Params& params, const LogGrid& grid, double quad_tol) {
            return assemble_T(params, grid, quad_tol).entries;
        },
        py::arg("params"), py::arg("grid"), py::arg("quad_tol") = 1e-12);
    m.def(
        "symbol_error",
        [](const Params& params, const LogGrid& grid, std::vector<double> a) { return symbol_error(params, grid, a); },
        py::arg("params"), py::arg("grid"), py::arg("a_values"));

    m.def(
        "solve_ground_state",
        [](const Params& params, const LogGrid& grid, double tol) {
            SolveOptions opts;
            opts.tol = tol;
            const GroundState gs = solve_ground_state(params, grid, opts);
            py::dict d;
            d["kappa"] = gs.profile.coordinates();
            d["Q"] = gs.profile.values;
            d["residual"] = gs.residual;
            d["energy"] = gs.energy;
            d["flow_iterations"] = gs.flow_iterations;
            d["newton_iterations"] = gs.newton_iterations;
            return d;
        },
        py::arg("params"), py::arg("grid"), py::arg("tol") = 1e-9);
    m.def("spectrum", &spectrum_summary, py::arg("params"), py::arg("grid"), py::arg("k") = 6,
          py::arg("quad_tol") = 1e-12);
    m.def("continue_branch", &branch_summary, py::arg("N"), py::arg("p"), py::arg("s0"), py::arg("s_end"),
          py::arg("grid"), py::arg("ds_max") = 0.1);
    m.def(
        "endpoint_soliton",
        [](double p, double A, const LogGrid& grid, int N) { return endpoint_soliton(p, A, grid, N).values; },
        py::arg("p"), py::arg("A"), py::arg("grid"), py::arg("N") = 3);

    m.attr("__version__") = kVersion;
}
