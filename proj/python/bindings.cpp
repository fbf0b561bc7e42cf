#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "saext/anomaly.hpp"
#include "saext/classical.hpp"
#include "saext/cli.hpp"
#include "saext/deficiency.hpp"
#include "saext/discrete.hpp"
#include "saext/extension.hpp"
#include "saext/geometry.hpp"
#include "saext/spectral.hpp"

namespace py = pybind11;
using namespace saext;

namespace {

Interval parse_interval(double a, double b) {
    if (std::isinf(a) && std::isinf(b)) return Interval::full_line();
    if (std::isinf(b)) return Interval::half_line(a);
    return Interval::finite(a, b);
}

OperatorKind parse_kind(const std::string& name) {
    if (name == "momentum") return OperatorKind::momentum;
    if (name == "hamiltonian") return OperatorKind::free_hamiltonian;
    if (name == "time") return OperatorKind::time_operator;
    throw Error(Errc::invalid_argument, "operator must be momentum, hamiltonian or time", name);
}

py::dict report_dict(const ParadoxReport& r) {
    py::dict q;
    for (const auto& x : r.quantities) q[py::str(x.name)] = x.value;
    py::dict d;
    d["id"] = r.id;
    d["quantities"] = q;
    d["verdict"] = r.verdict;
    return d;
}

}  // namespace

PYBIND11_MODULE(_saext, m) {
    m.doc() = "Self-adjoint extensions, boundary conditions and the scale anomaly";

    static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetObject(error.ptr(), py::make_tuple(std::string(to_string(e.code())), e.what(), e.context()).ptr());
        }
    });

    m.def(
        "deficiency_indices",
        [](const std::string& op, double a, double b, double lam) {
            const auto spec = OperatorSpec::make(parse_kind(op), parse_interval(a, b));
            const auto r = solve_deficiency(spec, lam);
            return py::make_tuple(r.n_plus, r.n_minus, std::string(to_string(r.classification.kind)),
                                  verify_deficiency_numerically(spec, r));
        },
        py::arg("op"), py::arg("a") = 0.0, py::arg("b") = 1.0, py::arg("lam") = 1.0,
        "(n_plus, n_minus, classification, residual)");

    m.def("momentum_theta", [](double gamma) { return std::get<PhaseCondition>(momentum_bc_from_unitary(gamma)).theta; },
          py::arg("gamma"), "Phase theta of psi(1) = e^{i theta} psi(0) selected by gamma");
    m.def("robin_alpha", [](double gamma) { return std::get<RobinCondition>(halfline_bc_from_unitary(gamma)).alpha; },
          py::arg("gamma"), "Robin parameter alpha selected by gamma (inf at the Dirichlet point)");

    m.def(
        "momentum_eigenvalues",
        [](double theta, int n_min, int n_max) {
            std::vector<double> v;
            for (const auto& e : momentum_spectrum(theta, Interval::finite(0, 1), n_min, n_max, 11).discrete)
                v.push_back(e.value);
            return v;
        },
        py::arg("theta"), py::arg("n_min"), py::arg("n_max"));
    m.def("discretized_momentum_eigs", &discretized_momentum_eigs, py::arg("theta"), py::arg("N"));
    m.def(
        "well_eigenvalues",
        [](double a, int n_max) {
            std::vector<double> v;
            for (const auto& e : well_spectrum(a, 1, n_max, 11).discrete) v.push_back(e.value);
            return v;
        },
        py::arg("a"), py::arg("n_max"));
    m.def("well_fd_eigenvalue", &well_fd_eigenvalue, py::arg("a"), py::arg("n"), py::arg("interior"));

    m.def(
        "bound_state_energy",
        [](double alpha) -> std::optional<double> {
            const auto b = bound_state(alpha, 101);
            if (!b) return std::nullopt;
            return b->energy;
        },
        py::arg("alpha"), "E = -alpha^2, or None for alpha >= 0");
    m.def(
        "bound_state_shooting", [](double alpha) { return bound_state_shooting(alpha); }, py::arg("alpha"));
    m.def("reflection_coefficient", [](double k, double alpha) { return reflection_coefficient(k, alpha).R; },
          py::arg("k"), py::arg("alpha"));

    m.def(
        "anomaly",
        [](double alpha, double t, std::size_t grid) {
            const auto r = anomaly_quadrature(alpha, t, grid);
            py::dict d;
            d["anomaly"] = r.anomaly;
            d["anomaly_complex"] = r.anomaly_complex;
            d["bound_energy"] = r.bound_energy;
            d["residual"] = r.residual;
            d["term_HD"] = r.term_HD;
            d["term_H_of_D"] = r.term_H_of_D;
            return d;
        },
        py::arg("alpha"), py::arg("t") = 0.0, py::arg("grid") = 40001);

    m.def("trace_commutator_check",
          [](std::size_t N, int trials, std::uint64_t seed) { return report_dict(trace_commutator_check(N, trials, seed)); },
          py::arg("N"), py::arg("trials") = 100, py::arg("seed") = 0);
    m.def("cosine_basis_report", [](double l, int M) { return report_dict(cosine_basis_report(l, M)); }, py::arg("l"),
          py::arg("M"));
    m.def("eigenvector_commutator_demo",
          [](double theta, std::size_t N) { return report_dict(eigenvector_commutator_demo(theta, N)); },
          py::arg("theta"), py::arg("N"));
    m.def("commuting_observables_demo", [](double a, int n) { return report_dict(commuting_observables_demo(a, n)); },
          py::arg("a"), py::arg("n_max"));

    m.def(
        "poisson_bracket_string",
        [](const std::string& which) {
            using O = MonomialObservable;
            if (which == "q,p") return poisson_bracket(O::q(), O::p()).to_string();
            if (which == "H,D") {
                const auto H = O::p() * O::p();
                return poisson_bracket(H, O::t() * H - 0.5 * (O::q() * O::p())).to_string();
            }
            throw Error(Errc::invalid_argument, "known brackets: q,p and H,D", which);
        },
        py::arg("which"));
    m.def(
        "dilatation_drift",
        [](double g, const std::string& s, double q0, double p0, double t_end, double tol) {
            const auto r = dilatation_drift({g, Rational::parse(s)}, {q0, p0}, t_end, tol);
            py::dict d;
            d["max_drift"] = r.max_drift;
            d["final_drift"] = r.final_drift;
            d["predicted_drift"] = r.predicted_drift;
            d["mismatch"] = r.mismatch;
            d["energy_drift"] = r.energy_drift;
            return d;
        },
        py::arg("g") = 1.0, py::arg("s") = "-2", py::arg("q0") = 1.0, py::arg("p0") = 0.3, py::arg("t_end") = 5.0,
        py::arg("tol") = 1e-10);

    m.def(
        "radial_defect",
        [](const std::string& metric, double lo, double hi, std::size_t grid) {
            const auto omega = connection_condition(MeasureSpec::from_name(metric));
            const auto f = GridFunction::sample(uniform_grid(0.0, hi + 1.0, grid), bump(lo, hi), MeasureWeight::radial());
            return radial_symmetry_defect(omega, f, f);
        },
        py::arg("metric"), py::arg("lo") = 1.0, py::arg("hi") = 2.0, py::arg("grid") = 8001);

    m.def(
        "cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli::dispatch(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the saext command line in-process: (exit_code, stdout, stderr)");

    m.attr("__version__") = std::string(cli::kVersion);
}
