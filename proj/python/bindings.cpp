#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jacobi/cfrac.hpp"
#include "jacobi/coeffs.hpp"
#include "jacobi/eigenspec.hpp"
#include "jacobi/errors.hpp"
#include "jacobi/families.hpp"
#include "jacobi/io.hpp"
#include "jacobi/recurrence.hpp"

namespace py = pybind11;
using namespace jacobi;

namespace {

// Reports cross the boundary as plain dicts via the same JSON schema the CLI emits.
py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_py(const py::object& o) {
    return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

std::optional<Limits> limits_arg(const std::optional<std::pair<double, double>>& l) {
    if (!l) return std::nullopt;
    return Limits{l->first, l->second};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Finite-section spectra, continued fractions and recurrences of Jacobi matrices";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    auto invalid = py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<InsufficientResolution>(m, "InsufficientResolution", invalid.ptr());
    py::register_exception<InputFileError>(m, "InputFileError", base.ptr());
    py::register_exception<NumericalFailure>(m, "NumericalFailure", base.ptr());
    py::register_exception<UnsupportedRange>(m, "UnsupportedRange", base.ptr());

    py::class_<CoefficientSequence>(m, "Sequence")
        .def_static(
            "table",
            [](std::vector<double> diag, std::vector<double> offdiag,
               std::optional<std::pair<double, double>> limits) {
                return CoefficientSequence::from_table(std::move(diag), std::move(offdiag), limits_arg(limits));
            },
            py::arg("diag"), py::arg("offdiag"), py::arg("limits") = py::none())
        .def_static(
            "from_json", [](const py::object& doc) { return coefficients_from_json(from_py(doc)); }, py::arg("doc"))
        .def("diag", &CoefficientSequence::diag, py::arg("n"))
        .def("offdiag", &CoefficientSequence::offdiag, py::arg("n"))
        .def_property_readonly("limits",
                               [](const CoefficientSequence& c) -> std::optional<std::pair<double, double>> {
                                   if (!c.declared_limits()) return std::nullopt;
                                   return std::make_pair(c.declared_limits()->a, c.declared_limits()->b);
                               })
        .def("to_json", [](const CoefficientSequence& c) { return to_py(coefficients_to_json(c)); });

    py::class_<SFraction>(m, "SFraction")
        .def_static(
            "positive",
            [](std::vector<double> terms, std::optional<double> tail) {
                return SFraction::positive_table(std::move(terms), tail);
            },
            py::arg("terms"), py::arg("tail") = py::none())
        .def_static(
            "complex",
            [](std::vector<Complex> terms, std::optional<Complex> tail) {
                return SFraction::complex_table(std::move(terms), tail);
            },
            py::arg("terms"), py::arg("tail") = py::none())
        .def_static(
            "from_json", [](const py::object& doc) { return sfraction_from_json(from_py(doc)); }, py::arg("doc"))
        .def("term", &SFraction::term, py::arg("k"))
        .def_property_readonly("kind", [](const SFraction& s) { return std::string(to_string(s.kind())); });

    m.def("family_names", &family_names);
    m.def("family_info", [](const std::string& name) { return to_py(to_json(family_info(name))); }, py::arg("name"));
    m.def(
        "family",
        [](const std::string& name, const py::kwargs& params) {
            std::map<std::string, double> p;
            for (const auto& [k, v] : params) p[k.cast<std::string>()] = v.cast<double>();
            return make_family(family_spec(name, p));
        },
        py::arg("name"));
    m.def("rogers_ramanujan_sfraction", &rogers_ramanujan_sfraction, py::arg("q"));

    m.def(
        "classify",
        [](const CoefficientSequence& c, std::pair<std::size_t, std::size_t> window, double tol) {
            return to_py(to_json(classify(c, {window.first, window.second}, tol)));
        },
        py::arg("seq"), py::arg("window") = std::make_pair<std::size_t, std::size_t>(500, 1000),
        py::arg("tol") = 1e-12);
    m.def(
        "truncate",
        [](const CoefficientSequence& c, std::size_t n) {
            const TruncatedJacobi t = truncate(c, n);
            return std::make_pair(t.diag, t.offdiag);
        },
        py::arg("seq"), py::arg("n"));
    m.def("blumenthal_limits",
          [](double l, double l1) {
              const auto b = blumenthal_limits(l, l1);
              return py::dict(py::arg("a") = b.a, py::arg("b") = b.b, py::arg("lower") = b.lower,
                              py::arg("upper") = b.upper);
          },
          py::arg("l"), py::arg("l1"));

    m.def(
        "eigen_tridiag",
        [](std::vector<double> diag, std::vector<double> offdiag) {
            py::gil_scoped_release release;
            const Eigensystem es = eigen_tridiag(TruncatedJacobi{std::move(diag), std::move(offdiag)});
            return std::make_pair(es.eigenvalues, es.weights);
        },
        py::arg("diag"), py::arg("offdiag"));
    m.def(
        "spectrum",
        [](const CoefficientSequence& c, std::vector<std::size_t> sizes, double tol) {
            SpectrumReport r;
            {
                py::gil_scoped_release release;
                r = spectrum_sweep(c, std::move(sizes), tol);
            }
            return to_py(to_json(r));
        },
        py::arg("seq"), py::arg("sizes") = std::vector<std::size_t>{200, 400}, py::arg("tol") = 1e-12);
    m.def(
        "krein_decay",
        [](const CoefficientSequence& c, std::vector<double> roots, std::size_t depth, double tol) {
            return to_py(to_json(krein_gj_decay(c, KreinPolynomial(std::move(roots)), depth, tol)));
        },
        py::arg("seq"), py::arg("roots"), py::arg("depth"), py::arg("tol") = 1e-3);
    m.def(
        "zero_gap",
        [](const CoefficientSequence& c, std::size_t n, double lo, double hi) {
            return to_py(to_json(zero_gap_density(c, n, lo, hi)));
        },
        py::arg("seq"), py::arg("n"), py::arg("lo"), py::arg("hi"));

    m.def(
        "eval_polys",
        [](const CoefficientSequence& c, Complex x, std::size_t n) {
            const auto t = eval_polys(c, x, n);
            return py::dict(py::arg("values") = t.values, py::arg("numerators") = t.numerators,
                            py::arg("scale_log") = t.scale_log);
        },
        py::arg("seq"), py::arg("x"), py::arg("n"));
    m.def(
        "poincare_roots",
        [](double a, double b, Complex x) {
            const auto r = poincare_roots(a, b, x);
            return py::make_tuple(r.xi1, r.xi2, std::string(to_string(r.regime)));
        },
        py::arg("a"), py::arg("b"), py::arg("x"));
    m.def(
        "ratio",
        [](const CoefficientSequence& c, Complex x, std::size_t n, double tol, std::size_t window) {
            return to_py(to_json(ratio_sequence(c, x, n, tol, window)));
        },
        py::arg("seq"), py::arg("x"), py::arg("n") = 200, py::arg("tol") = 1e-12,
        py::arg("window") = kDefaultStableRun);
    m.def(
        "mass",
        [](const CoefficientSequence& c, double x, std::size_t n) { return to_py(to_json(christoffel_mass(c, x, n))); },
        py::arg("seq"), py::arg("x"), py::arg("n") = 1000);

    m.def(
        "s_convergent",
        [](const SFraction& s, Complex t, std::size_t n) {
            const auto v = s_convergent(s, t, n);
            return py::make_tuple(v.value, std::string(to_string(v.status)));
        },
        py::arg("s"), py::arg("t"), py::arg("n"));
    m.def(
        "j_convergent",
        [](const CoefficientSequence& c, Complex z, std::size_t n) {
            const auto v = j_convergent(to_jfraction(c), z, n);
            return py::make_tuple(v.value, std::string(to_string(v.status)));
        },
        py::arg("seq"), py::arg("z"), py::arg("n"));
    m.def(
        "cf_limit",
        [](const py::object& f, Complex point, double tol, std::size_t max_n, std::size_t window) {
            const FractionRef ref = py::isinstance<SFraction>(f)
                                        ? FractionRef(f.cast<SFraction>())
                                        : FractionRef(to_jfraction(f.cast<CoefficientSequence>()));
            return to_py(to_json(std::vector<GridPoint>{{point, estimate_limit(ref, point, tol, max_n, window)}})[0]);
        },
        py::arg("fraction"), py::arg("point"), py::arg("tol") = 1e-12, py::arg("max_n") = 100000,
        py::arg("window") = kDefaultConvergenceWindow);
    m.def(
        "check_contraction",
        [](const SFraction& s, Complex z, std::size_t n) { return to_py(to_json(check_contraction(s, z, n))); },
        py::arg("s"), py::arg("z"), py::arg("n"));

    m.def("bessel_j", &bessel_j, py::arg("nu"), py::arg("x"));
    m.def("bessel_zero", &bessel_zero, py::arg("nu"), py::arg("k"));
}
