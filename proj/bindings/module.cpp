#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "histforce/checks.hpp"
#include "histforce/condition.hpp"
#include "histforce/errors.hpp"
#include "histforce/generate.hpp"
#include "histforce/signatures.hpp"
#include "histforce/table.hpp"
#include "histforce/term.hpp"
#include "histforce/wire.hpp"

namespace py = pybind11;

namespace {

using namespace histforce;

// core objects travel as shared_ptr<const T>; tiny value wrappers keep the
// binding layer trivial
struct py_term {
    term_ptr t;
};
struct py_cond {
    condition_ptr p;
};

py_cond wrap(condition_ptr p) { return {std::move(p)}; }

py::dict report_dict(const check_report& r) {
    py::dict d;
    d["name"] = r.name;
    d["condition_id"] = r.condition_id;
    d["verdict"] = r.pass ? std::string("pass") : std::string("fail");
    d["counterexample"] =
        r.counterexample.is_null() ? py::object(py::none()) : py::object(py::str(r.counterexample.dump()));
    d["ms"] = r.ms;
    return d;
}

generator_spec spec_of(std::uint64_t seed, std::uint32_t width, std::uint32_t height,
                       const std::string& pool, const std::string& hearts, std::uint32_t gap) {
    generator_spec s;
    s.seed = seed;
    s.width = width;
    s.height = height;
    s.pool = pool_from_string(pool);
    if (hearts == "none")
        s.hearts = generator_spec::heart_kind::none;
    else if (hearts == "occasional")
        s.hearts = generator_spec::heart_kind::occasional;
    else
        throw invalid_input("hearts: expected none|occasional, got '" + hearts + "'");
    s.block_gap = gap;
    return s;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "forcing-condition workbench: conditions, orders, signatures, checks";

    auto base = py::register_exception<error>(m, "Error");
    py::register_exception<invalid_input>(m, "InvalidInput", base.ptr());
    py::register_exception<format_error>(m, "FormatError", base.ptr());
    py::register_exception<resource_limit>(m, "ResourceLimit", base.ptr());
    py::register_exception<internal_error>(m, "InternalError", base.ptr());
    py::register_exception<search_failure>(m, "SearchFailure", base.ptr());

    py::class_<py_term>(m, "Term")
        .def_static("const0", [] { return py_term{term::const0()}; })
        .def_static("const1", [] { return py_term{term::const1()}; })
        .def_static(
            "var", [](std::uint32_t slot) { return py_term{term::var(slot)}; }, py::arg("slot"))
        .def_static("negation", [](const py_term& x) { return py_term{term::negation_of(x.t)}; })
        .def_static("conjunction",
                    [](const py_term& a, const py_term& b) {
                        return py_term{term::conjunction_of(a.t, b.t)};
                    })
        .def_static("disjunction",
                    [](const py_term& a, const py_term& b) {
                        return py_term{term::disjunction_of(a.t, b.t)};
                    })
        .def_property_readonly("arity", [](const py_term& x) { return x.t->arity(); })
        .def("__str__", [](const py_term& x) { return x.t->to_string(); })
        .def("__eq__", [](const py_term& a, const py_term& b) { return a.t->equals(*b.t); });
    m.def("sigma_maj", [] { return py_term{sigma_maj()}; });

    py::class_<py_cond>(m, "Condition")
        .def_static(
            "atomic",
            [](std::uint32_t width, gen_index index) { return wrap(condition::atomic(width, index)); },
            py::arg("width"), py::arg("index"))
        .def_static(
            "amalgamate",
            [](std::uint32_t zeta_star, const py_term& tau_star, std::vector<gen_index> heart,
               const std::vector<std::pair<py_cond, std::vector<gen_index>>>& parts) {
                std::vector<condition::part> ps;
                ps.reserve(parts.size());
                for (const auto& [c, v] : parts) ps.push_back({c.p, v});
                return wrap(condition::amalgamate(zeta_star, tau_star.t, std::move(heart),
                                                  std::move(ps)));
            },
            py::arg("zeta_star"), py::arg("tau_star"), py::arg("heart"), py::arg("parts"))
        .def_property_readonly("width", [](const py_cond& c) { return c.p->width(); })
        .def_property_readonly("height", [](const py_cond& c) { return c.p->height(); })
        .def_property_readonly("is_atomic", [](const py_cond& c) { return c.p->is_atomic(); })
        .def_property_readonly("support", [](const py_cond& c) { return c.p->support(); })
        .def_property_readonly("rows", [](const py_cond& c) { return c.p->table().rows(); })
        .def_property_readonly("id", [](const py_cond& c) { return condition_id(*c.p); })
        .def(
            "history",
            [](const py_cond& c, gen_index j, std::uint32_t level) {
                return c.p->history(j, level).encoded(c.p->width());
            },
            py::arg("j"), py::arg("level"),
            "history value encoded as part index, width (= theta) or width+1")
        .def(
            "fingerprint", [](const py_cond& c, gen_index j) { return c.p->fingerprint(j); },
            py::arg("j"))
        .def("encode", [](const py_cond& c) { return encode_string(*c.p); })
        .def("equals", [](const py_cond& a, const py_cond& b) { return a.p->equals(*b.p); });

    m.def(
        "decode", [](const std::string& text) { return wrap(decode_string(text)); },
        py::arg("text"));
    m.def(
        "generate",
        [](std::uint64_t seed, std::uint32_t width, std::uint32_t height, const std::string& pool,
           const std::string& hearts, std::uint32_t gap) {
            return wrap(generate(spec_of(seed, width, height, pool, hearts, gap)));
        },
        py::arg("seed") = 0, py::arg("width") = 2, py::arg("height") = 0, py::arg("pool") = "mixed",
        py::arg("hearts") = "none", py::arg("gap") = 1);

    m.def("leq", [](const py_cond& p, const py_cond& q) { return leq(*p.p, *q.p); });
    m.def("leq_pr", [](const py_cond& p, const py_cond& q) { return leq_pr(*p.p, *q.p); });
    m.def("transform", [](const py_cond& p, const py_cond& q) { return wrap(transform(p.p, q.p)); });
    m.def(
        "components",
        [](const py_cond& p, std::uint32_t alpha) {
            std::vector<py_cond> out;
            for (auto& c : components(p.p, alpha)) out.push_back(wrap(std::move(c)));
            return out;
        },
        py::arg("p"), py::arg("alpha"));
    m.def("pr_component",
          [](const py_cond& p, std::uint32_t alpha) { return wrap(pr_component(p.p, alpha)); });
    m.def("is_closed",
          [](const py_cond& p, const std::vector<std::uint32_t>& z) { return is_p_closed(p.p, z); });
    m.def("close",
          [](const py_cond& p, const std::vector<std::uint32_t>& z) { return close(p.p, z); });
    m.def("u_set",
          [](const py_cond& p, const std::vector<std::uint32_t>& z) { return u_set(p.p, z); });
    m.def("maj_chain_length", [](const py_cond& p) {
        std::vector<term_instance> chain = build_maj_chain(p.p);
        return longest_chain(p.p->table(), chain).length;
    });
    m.def(
        "run_suite",
        [](const py_cond& p) {
            py::list out;
            for (const auto& r : run_suite(p.p, check_budget{})) out.append(report_dict(r));
            return out;
        },
        py::arg("p"));
}
