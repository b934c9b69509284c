#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "polarkit/applications.hpp"
#include "polarkit/certificate.hpp"
#include "polarkit/cli.hpp"
#include "polarkit/error.hpp"
#include "polarkit/parallel.hpp"

namespace py = pybind11;
using namespace polarkit;

namespace {

FieldTable field_of_order(unsigned q) {
  unsigned e = 0;
  while ((1u << e) < q) ++e;
  require(q >= 2 && (1u << e) == q, ErrorKind::usage, "q must be a power of 2");
  return FieldTable::make(2, e);
}

// Certificates cross the boundary as JSON text; the Python side parses them.
std::string construct(int q, int n, std::size_t samples, std::uint64_t seed) {
  ConstructOptions opt{samples, seed};
  HemisystemResult r;
  {
    py::gil_scoped_release nogil;
    r = construct_relative_hemisystem(n, field_of_order(q), opt);
  }
  std::optional<LineCensus> census;
  if (r.space->off_points().size() <= 4096) census = line_census(*r.space, r.o1, r.o2);
  return hemisystem_certificate(r, census, samples).dump();
}

std::string search(const std::string& space, std::uint64_t budget, bool prove) {
  const auto p = space_by_name(space);
  SearchOptions opt;
  opt.budget = budget;
  py::gil_scoped_release nogil;
  const auto s = search_hemisystems(p, enumerate_generators(p), opt);
  return search_certificate(p, s, opt, prove).dump();
}

std::string ovoid(int q, int n, std::vector<int> v) {
  require(v.size() == 4, ErrorKind::usage, "variant needs four entries i, side_i, j, side_j");
  const auto x = build_mixed_ovoid(n, field_of_order(q), {v[0], v[1] != 0, v[2], v[3] != 0});
  const auto w = symplectic_of(x);
  const auto rep = verify_symplectic_ovoid(x, enumerate_generators(w));
  return ovoid_certificate(x, rep, two_character_check(w.ps(), x.x)).dump();
}

std::string srg(int q, int n) {
  const auto r = construct_relative_hemisystem(n, field_of_order(q));
  return srg_certificate(*r.space, srg_build_verify(*r.space, r.o1)).dump();
}

std::string demo(int q) { return demo_certificate(hyperbolic_demo(field_of_order(q))).dump(); }

py::dict verify(const std::string& text) {
  const auto v = verify_certificate(Json::parse(text));
  py::dict d;
  d["pass"] = v.pass;
  d["claim"] = v.claim;
  d["counters"] = v.counters.dump();
  d["witnesses"] = v.witnesses;
  return d;
}

py::dict space_census(const std::string& name) {
  const auto p = space_by_name(name);
  py::dict d;
  d["points"] = p.points().size();
  d["off_sigma"] = p.off_points().size();
  d["section"] = p.section_points().size();
  d["rank"] = p.rank();
  d["symplectic"] = p.is_symplectic();
  if (auto g = expected_generator_count(p)) d["generators"] = *g;
  return d;
}

py::tuple run(std::vector<std::string> args) {
  args.insert(args.begin(), "polarkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_polarkit, m) {
  // Leaked on purpose: the translator may run during interpreter shutdown.
  auto make = [&m](const char* name, PyObject* parent) {
    const std::string full = std::string("polarkit.") + name;
    PyObject* t = PyErr_NewException(full.c_str(), parent, nullptr);
    m.add_object(name, py::handle(t));
    return t;
  };
  static PyObject* base = make("PolarkitError", PyExc_RuntimeError);
  static PyObject* usage = make("UsageError", base);
  static PyObject* domain = make("DomainError", base);
  static PyObject* resource = make("ResourceError", base);
  static PyObject* verification = make("VerificationError", base);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyObject* t = base;
      switch (e.kind()) {
        case ErrorKind::usage: t = usage; break;
        case ErrorKind::domain: t = domain; break;
        case ErrorKind::resource: t = resource; break;
        case ErrorKind::verification: t = verification; break;
        default: break;
      }
      PyErr_SetString(t, e.what());
    }
  });

  py::class_<FieldTable>(m, "Field")
      .def(py::init(&field_of_order), py::arg("q"))
      .def_property_readonly("order", &FieldTable::order)
      .def_property_readonly("modulus", &FieldTable::modulus)
      .def("add", &FieldTable::add)
      .def("mul", &FieldTable::mul)
      .def("inv", &FieldTable::inv)
      .def("pow", &FieldTable::pow)
      .def("sqrt", &FieldTable::sqrt)
      .def("trace", &FieldTable::absolute_trace);

  m.def("set_threads", &set_threads, py::arg("n"));
  m.def("threads", &threads);
  m.def("construct", &construct, py::arg("q"), py::arg("n"), py::arg("samples") = 100000,
        py::arg("seed") = 1);
  m.def("search", &search, py::arg("space"), py::arg("budget") = 0, py::arg("prove_nonexistence") = false);
  m.def("ovoid", &ovoid, py::arg("q"), py::arg("n"), py::arg("variant"));
  m.def("srg", &srg, py::arg("q") = 2, py::arg("n") = 2);
  m.def("demo_hyperbolic", &demo, py::arg("q"));
  m.def("verify", &verify, py::arg("certificate"));
  m.def("census", &space_census, py::arg("space"));
  m.def("run", &run, py::arg("args"));
  m.attr("__version__") = kVersion;
}
