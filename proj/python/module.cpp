#include "liesynth/commands.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/operators.h>

#include <sstream>

namespace py = pybind11;
using namespace liesynth;

namespace {

SamplerConfig make_cfg(int samples, std::uint64_t seed, double tol) {
  SamplerConfig cfg;
  cfg.samples = samples;
  cfg.seed = seed;
  cfg.eps_abs = cfg.eps_rel = tol;
  cfg.validate();
  return cfg;
}

VectorField to_field(const std::vector<std::string>& vars, const std::vector<std::string>& coords) {
  std::vector<Expr> c;
  for (const auto& s : coords) c.push_back(parse(s));
  return VectorField(vars, std::move(c));
}

std::vector<std::string> from_field(const VectorField& f) {
  std::vector<std::string> out;
  for (const auto& c : f.coordinates()) out.push_back(print(c));
  return out;
}

py::tuple run(int (*cmd)(const CommandOptions&, std::ostream&, std::ostream&), CommandOptions o,
              bool structured) {
  o.report = structured ? ReportFormat::Structured : ReportFormat::Text;
  std::ostringstream out, err;
  int rc = cmd(o, out, err);
  return py::make_tuple(rc, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(liesynth, m) {
  m.doc() = "Symbolic Lie-symmetry checks and synthesis of admitting systems";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
  py::register_exception<FieldError>(m, "FieldError", PyExc_ValueError);
  py::register_exception<JobError>(m, "JobError", PyExc_ValueError);
  py::register_exception<SingularFrame>(m, "SingularFrame", PyExc_ValueError);
  py::register_exception<SynthesisError>(m, "SynthesisError", PyExc_RuntimeError);
  py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_ArithmeticError);

  py::class_<Expr>(m, "Expr")
      .def(py::init([](const std::string& s) { return parse(s); }), py::arg("text"))
      .def(py::init<long>())
      .def("__str__", [](const Expr& e) { return print(e); })
      .def("__repr__", [](const Expr& e) { return "Expr('" + print(e) + "')"; })
      .def("__hash__", &Expr::hash)
      .def(py::self == py::self)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def(py::self / py::self)
      .def(-py::self)
      .def("__pow__", [](const Expr& e, long k) { return pow(e, Rational(k)); })
      .def("diff", [](const Expr& e, const std::string& v) { return differentiate(e, v); })
      .def("subs",
           [](const Expr& e, const std::map<std::string, std::string>& b) {
             Bindings bb;
             for (const auto& [k, v] : b) bb[k] = parse(v);
             return substitute(e, bb);
           })
      .def("free_variables", [](const Expr& e) { return free_variables(e); })
      .def("evaluate",
           [](const Expr& e, const std::map<std::string, double>& point, std::uint64_t seed) {
             SamplerConfig cfg;
             cfg.seed = seed;
             return eval(e, point, cfg);
           },
           py::arg("point"), py::arg("seed") = 0);

  m.def("parse", [](const std::string& s) { return parse(s); }, py::arg("text"));
  m.def("simplify", [](const std::string& s) { return print(simplify(parse(s))); });
  m.def("diff", [](const std::string& s, const std::string& v) { return print(differentiate(parse(s), v)); },
        py::arg("expr"), py::arg("var"));

  m.def("is_zero",
        [](const std::string& s, int samples, std::uint64_t seed, double tol) {
          ZeroVerdict z = is_zero(parse(s), make_cfg(samples, seed, tol));
          return py::make_tuple(to_string(z.kind), z.witness);
        },
        py::arg("expr"), py::arg("samples") = 32, py::arg("seed") = 0, py::arg("tol") = 1e-9,
        "Zero test; returns (verdict, witness point).");

  m.def("lie_bracket",
        [](const std::vector<std::string>& vars, const std::vector<std::string>& a,
           const std::vector<std::string>& b) {
          return from_field(lie_bracket(to_field(vars, a), to_field(vars, b)));
        },
        py::arg("variables"), py::arg("a"), py::arg("b"));

  m.def("frame_expand",
        [](const std::vector<std::string>& vars, const std::vector<std::string>& f,
           const std::vector<std::vector<std::string>>& basis) {
          std::vector<VectorField> fb;
          for (const auto& b : basis) fb.push_back(to_field(vars, b));
          std::vector<std::string> out;
          for (const auto& c : frame_expand(to_field(vars, f), fb, SamplerConfig{})) out.push_back(print(c));
          return out;
        },
        py::arg("variables"), py::arg("field"), py::arg("basis"));

  m.def("catalog_ids", &catalog_ids);
  m.def("catalog_instantiate",
        [](const std::string& id, const std::map<std::string, std::string>& bindings,
           std::optional<std::string> k) {
          std::map<std::string, Expr> b;
          for (const auto& [name, body] : bindings) b[name] = parse(body);
          std::optional<Rational> kk;
          if (k) kk = parse(*k).value();
          SystemSpec s = catalog_instantiate(id, b, kk);
          std::vector<std::vector<std::string>> rows;
          for (const auto& row : s.f) {
            std::vector<std::string> r;
            for (const auto& e : row) r.push_back(print(e));
            rows.push_back(std::move(r));
          }
          return py::make_tuple(s.variables, rows);
        },
        py::arg("id"), py::arg("bindings") = std::map<std::string, std::string>{},
        py::arg("k") = py::none(), "Returns (variables, f) with f[i][j] as strings.");

  auto job_opts = [](const std::string& job, const std::string& catalog, std::uint64_t seed) {
    CommandOptions o;
    o.job = job;
    o.catalog = catalog;
    o.seed = seed;
    return o;
  };

  m.def("verify",
        [job_opts](const std::string& job, const std::string& catalog, std::uint64_t seed, bool structured) {
          return run(cmd_verify, job_opts(job, catalog, seed), structured);
        },
        py::arg("job") = "", py::arg("catalog") = "", py::arg("seed") = 0, py::arg("structured") = false,
        "Runs the verify command; returns (exit code, stdout, stderr).");
  m.def("synth",
        [job_opts](const std::string& job, std::optional<std::string> construction, std::uint64_t seed) {
          CommandOptions o = job_opts(job, "", seed);
          if (construction == "general") o.construction = Construction::General;
          else if (construction == "abelian") o.construction = Construction::Abelian;
          else if (construction) throw py::value_error("construction must be 'general' or 'abelian'");
          return run(cmd_synth, o, false);
        },
        py::arg("job"), py::arg("construction") = py::none(), py::arg("seed") = 0);
  m.def("numcheck",
        [job_opts](const std::string& job, const std::string& catalog, std::vector<double> alphas) {
          CommandOptions o = job_opts(job, catalog, 0);
          o.alphas = std::move(alphas);
          return run(cmd_numcheck, o, false);
        },
        py::arg("job"), py::arg("catalog") = "", py::arg("alphas") = std::vector<double>{});
}
