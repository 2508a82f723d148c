#include "dhym/config.hpp"
#include "dhym/continuity.hpp"
#include "dhym/errors.hpp"
#include "dhym/phase.hpp"
#include "dhym/report.hpp"
#include "dhym/stability.hpp"
#include "dhym/subsolution.hpp"
#include "dhym/torus.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <vector>

namespace py = pybind11;
using namespace dhym;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using CArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

py::object to_python(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json from_python(const py::handle& o) {
    return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

HermitianForm form_from(const CArray& a) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw InputError("form must be a square matrix");
    const auto n = static_cast<Eigen::Index>(a.shape(0));
    ComplexMatrix m(n, n);
    auto r = a.unchecked<2>();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k) m(i, k) = r(i, k);
    return HermitianForm(std::move(m));
}

RealMatrix real_from(const Array& a) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw InputError("B must be a square matrix");
    const auto n = static_cast<Eigen::Index>(a.shape(0));
    RealMatrix m(n, n);
    auto r = a.unchecked<2>();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k) m(i, k) = r(i, k);
    return m;
}

// Fields are arrays of shape (N,)*n in C order, axis j holding x_{j+1}.
TorusProblem problem_for(const Array& field, const Array& B, const std::optional<CArray>& alpha) {
    const int n = static_cast<int>(field.ndim());
    if (n < 1 || n > TorusGrid::kMaxDim) throw InputError("field must have 1 to 3 axes");
    const auto N = field.shape(0);
    for (int j = 1; j < n; ++j) {
        if (field.shape(j) != N) throw InputError("field must have N points on every axis");
    }
    RealMatrix b = real_from(B);
    if (b.rows() != n) throw InputError("B dimension does not match the field");
    if (alpha) return TorusProblem(n, static_cast<int>(N), form_from(*alpha), std::move(b));
    return TorusProblem(n, static_cast<int>(N), std::move(b));
}

ScalarField flat(const Array& a) {
    return Eigen::Map<const ScalarField>(a.data(), static_cast<Eigen::Index>(a.size()));
}

Array shaped(const ScalarField& v, const TorusGrid& g) {
    std::vector<py::ssize_t> shape(static_cast<std::size_t>(g.dim()), g.points_per_axis());
    Array out(shape);
    std::copy(v.data(), v.data() + v.size(), out.mutable_data());
    return out;
}

SolverOptions solver_options(const py::dict& d) {
    return parse_run_config(json{{"solver", from_python(d)}}).solver;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Phase algebra, torus solver, continuity path and stability toolkit";
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);

    m.def("theta", [](std::vector<double> l) { return theta(Spectrum(std::move(l))); }, py::arg("spectrum"));
    m.def(
        "relative_eigenvalues",
        [](const CArray& alpha, const CArray& omega) {
            return relative_eigenvalues(form_from(alpha), form_from(omega)).values();
        },
        py::arg("alpha"), py::arg("omega"));
    m.def("f0", [](std::vector<double> l, double sigma) { return f0(Spectrum(std::move(l)), sigma); },
          py::arg("spectrum"), py::arg("sigma"));
    m.def(
        "boundary_solve",
        [](const std::vector<double>& prefix, double sigma) {
            return boundary_solve(prefix, ConeLevel{static_cast<int>(prefix.size()) + 1, sigma});
        },
        py::arg("prefix"), py::arg("sigma"));
    m.def(
        "boundary_report",
        [](std::vector<double> l, double sigma) {
            return to_python(to_json(boundary_report(Spectrum(std::move(l)), sigma)));
        },
        py::arg("spectrum"), py::arg("sigma"));

    m.def(
        "c_subsolution_test",
        [](std::vector<double> mu, double h) { return to_python(to_json(c_subsolution_test(Spectrum(std::move(mu)), h))); },
        py::arg("mu"), py::arg("h"));
    m.def(
        "form_positivity_test",
        [](std::vector<double> mu, double t) {
            return to_python(to_json(form_positivity_test(Spectrum(std::move(mu)), t)));
        },
        py::arg("mu"), py::arg("theta_hat"));
    m.def(
        "argument_pairing_test",
        [](std::vector<double> mu, double t, int p) {
            return to_python(to_json(argument_pairing_test(Spectrum(std::move(mu)), t, p)));
        },
        py::arg("mu"), py::arg("theta_hat"), py::arg("p"));

    m.def(
        "theta_field",
        [](const Array& u, const Array& B, std::optional<CArray> alpha) {
            const TorusProblem prob = problem_for(u, B, alpha);
            return shaped(theta_field(flat(u), prob), prob.grid);
        },
        py::arg("u"), py::arg("B"), py::arg("alpha") = py::none());
    m.def(
        "solve",
        [](const Array& h, const Array& B, std::optional<Array> u0, std::optional<CArray> alpha,
           const std::string& method, double t_end, const py::dict& options) {
            const TorusProblem prob = problem_for(h, B, alpha);
            const PotentialField start =
                u0 ? PotentialField(prob.grid, flat(*u0)) : PotentialField::zero(prob.grid);
            const SolverOptions opts = solver_options(options);
            SolveResult r;
            if (method == "newton") r = newton_solve(start, flat(h), prob, opts);
            else if (method == "flow") r = flow_solve(start, flat(h), prob, t_end, opts);
            else throw InputError("method must be 'newton' or 'flow'");
            py::dict out;
            out["u"] = shaped(r.u.values(), prob.grid);
            out["c"] = r.c;
            out["report"] = to_python(to_json(r.report, true));
            return out;
        },
        py::arg("h"), py::arg("B"), py::arg("u0") = py::none(), py::arg("alpha") = py::none(),
        py::arg("method") = "newton", py::arg("t_end") = 1e3, py::arg("options") = py::dict());
    m.def(
        "run_continuity",
        [](const Array& chi, const Array& B, std::optional<double> theta_hat, std::optional<CArray> alpha,
           const py::dict& options) {
            const TorusProblem prob = problem_for(chi, B, alpha);
            const PotentialField c(prob.grid, flat(chi));
            ContinuityResult r = run_continuity(plan_continuity(c, prob, {}, theta_hat), prob, solver_options(options));
            py::dict out;
            out["success"] = r.success;
            out["theta_hat"] = r.plan.theta_hat;
            out["deltas"] = to_python(to_json(r.plan.config));
            if (!r.plan.degenerate) out["theta1_checks"] = to_python(to_json(r.plan.theta1.checks));
            if (r.stage_a) {
                out["b1"] = r.stage_a->constant;
                out["stage_a"] = to_python(to_json(r.stage_a->report));
            }
            if (r.stage_b) out["stage_b"] = to_python(to_json(r.stage_b->report));
            if (r.success) {
                out["c1"] = r.c;
                out["u"] = shaped(r.solution.values(), prob.grid);
                out["final_residual_max"] = r.final_residual_max;
            }
            return out;
        },
        py::arg("chi"), py::arg("B"), py::arg("theta_hat") = py::none(), py::arg("alpha") = py::none(),
        py::arg("options") = py::dict());

    auto class_data = [](const py::dict& d) { return class_data_from_json(from_python(d)); };
    m.def(
        "stability_check", [class_data](const py::dict& d) { return to_python(to_json(stability_check(class_data(d)))); },
        py::arg("classdata"));
    m.def(
        "surface_criterion",
        [class_data](const py::dict& d) { return to_python(to_json(surface_criterion(class_data(d)))); },
        py::arg("classdata"));
    m.def(
        "central_charge", [](const std::vector<double>& v, int p) { return central_charge(v, p); }, py::arg("numbers"),
        py::arg("p"));
}
