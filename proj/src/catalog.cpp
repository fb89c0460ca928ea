#include "liesynth/synth.hpp"

#include <algorithm>

namespace liesynth {

namespace {

Expr p(const std::string& text) { return parse(text); }

VectorField field(const std::vector<std::string>& vars, const std::vector<std::string>& coords) {
  std::vector<Expr> c;
  for (const auto& s : coords) c.push_back(p(s));
  return VectorField(vars, std::move(c));
}

SystemSpec system(const std::vector<std::string>& vars,
                  const std::vector<std::vector<std::string>>& rows) {
  SystemSpec s;
  s.variables = vars;
  for (const auto& row : rows) {
    std::vector<Expr> r;
    for (const auto& e : row) r.push_back(p(e));
    s.f.push_back(std::move(r));
  }
  s.validate();
  return s;
}

std::map<std::string, std::size_t> unary(std::initializer_list<const char*> names) {
  std::map<std::string, std::size_t> out;
  for (const char* n : names) out[n] = 1;
  return out;
}

// Replaces "{k}" by the parenthesized rational.
std::string with_k(std::string text, const Rational& k) {
  const std::string ks = "(" + to_string(k) + ")";
  for (std::size_t pos; (pos = text.find("{k}")) != std::string::npos;) text.replace(pos, 3, ks);
  return text;
}

CatalogEntry scalings() {
  CatalogEntry e;
  e.id = "scalings";
  e.title = "two-parameter group of scalings of K^3";
  std::vector<std::string> v{"x1", "x2", "x3"};
  e.group = make_group(v, {field(v, {"x1", "0", "0"}), field(v, {"0", "x2", "0"})},
                       StructureConstants(2), {p("x3")});
  e.complement.operators = {field(v, {"0", "0", "x3"})};
  e.transformation = "x1 -> x1*exp(a1), x2 -> x2*exp(a2), x3 -> x3";
  e.templ = system(v, {{"x1*phi11(x3)", "x1*phi21(x3)"},
                       {"x2*phi12(x3)", "x2*phi22(x3)"},
                       {"x3*phi13(x3)", "x3*phi23(x3)"}});
  e.ufuncs = unary({"phi11", "phi12", "phi13", "phi21", "phi22", "phi23"});
  return e;
}

CatalogEntry dilatation() {
  CatalogEntry e;
  e.id = "dilatation";
  e.title = "one-parameter group of dilatations of the plane";
  std::vector<std::string> v{"x", "y"};
  e.group = make_group(v, {field(v, {"x", "y"})}, StructureConstants(1), {p("x/y")});
  e.complement.operators = {field(v, {"0", "y"})};
  e.transformation = "x -> x*exp(a), y -> y*exp(a)";
  e.templ = system(v, {{"x*phi1(x/y)"}, {"y*phi2(x/y)"}});
  e.ufuncs = unary({"phi1", "phi2"});
  return e;
}

CatalogEntry rotation() {
  CatalogEntry e;
  e.id = "rotation";
  e.title = "one-parameter group of rotations of the plane";
  std::vector<std::string> v{"x", "y"};
  e.group = make_group(v, {field(v, {"-y", "x"})}, StructureConstants(1), {p("x^2 + y^2")});
  e.complement.operators = {field(v, {"x", "y"})};
  e.transformation = "x -> x*cos(a) - y*sin(a), y -> x*sin(a) + y*cos(a)";
  e.templ = system(v, {{"-y*phi1(x^2 + y^2) + x*phi2(x^2 + y^2)"},
                       {"x*phi1(x^2 + y^2) + y*phi2(x^2 + y^2)"}});
  e.ufuncs = unary({"phi1", "phi2"});
  return e;
}

CatalogEntry lorentz() {
  CatalogEntry e;
  e.id = "lorentz";
  e.title = "one-parameter group of Lorentz transformations of the plane";
  std::vector<std::string> v{"x", "y"};
  e.group = make_group(v, {field(v, {"y", "x"})}, StructureConstants(1), {p("y^2 - x^2")});
  e.complement.operators = {field(v, {"x", "y"})};
  e.transformation = "x -> x*cosh(a) + y*sinh(a), y -> x*sinh(a) + y*cosh(a)";
  e.templ = system(v, {{"y*phi1(y^2 - x^2) + x*phi2(y^2 - x^2)"},
                       {"x*phi1(y^2 - x^2) + y*phi2(y^2 - x^2)"}});
  e.ufuncs = unary({"phi1", "phi2"});
  return e;
}

CatalogEntry projective() {
  CatalogEntry e;
  e.id = "projective";
  e.title = "one-parameter group of projective transformations of the plane";
  std::vector<std::string> v{"x", "y"};
  e.group = make_group(v, {field(v, {"x^2", "x*y"})}, StructureConstants(1), {p("x/y")});
  e.complement.operators = {field(v, {"x*y", "x + y^2"})};
  e.transformation = "x -> x/(1 - a*x), y -> y/(1 - a*x)";
  e.templ = system(v, {{"x^2*phi1(x/y) + x*y*phi2(x/y)"},
                       {"x*y*phi1(x/y) + (x + y^2)*phi2(x/y)"}});
  e.ufuncs = unary({"phi1", "phi2"});
  return e;
}

CatalogEntry stretch(const Rational& k) {
  if (k == 1 || k == -1)
    throw SpecError("stretch(" + to_string(k) +
                    ") is degenerate: the group operator and its complement are parallel");
  CatalogEntry e;
  e.id = "stretch(" + to_string(k) + ")";
  e.title = "one-parameter group of nonhomogeneous stretches of the plane";
  std::vector<std::string> v{"x", "y"};
  e.group = make_group(v, {field(v, {"x", with_k("{k}*y", k)})}, StructureConstants(1),
                       {p(with_k("x^{k}/y", k))});
  e.complement.operators = {field(v, {with_k("{k}*x", k), "y"})};
  e.transformation = with_k("x -> x*exp(a), y -> y*exp({k}*a)", k);
  e.templ = system(v, {{with_k("x*phi1(x^{k}/y) + {k}*x*phi2(x^{k}/y)", k)},
                       {with_k("{k}*y*phi1(x^{k}/y) + y*phi2(x^{k}/y)", k)}});
  e.ufuncs = unary({"phi1", "phi2"});
  return e;
}

CatalogEntry galilean() {
  CatalogEntry e;
  e.id = "galilean";
  e.title = "one-parameter group of Galilean transformations of the plane";
  std::vector<std::string> v{"x", "y"};
  e.group = make_group(v, {field(v, {"y", "0"})}, StructureConstants(1), {p("y")});
  e.complement.operators = {field(v, {"x", "y"})};
  e.transformation = "x -> x + a*y, y -> y";
  e.templ = system(v, {{"y*phi1(y) + x*phi2(y)"}, {"y*phi2(y)"}});
  e.ufuncs = unary({"phi1", "phi2"});
  return e;
}

Rational parse_k(std::string_view text) {
  Expr e;
  try {
    e = parse(text);
  } catch (const ParseError& err) {
    throw SpecError("stretch parameter '" + std::string(text) + "' is not a rational: " + err.what());
  }
  if (e.kind() != Kind::Constant)
    throw SpecError("stretch parameter '" + std::string(text) + "' is not a rational constant");
  return e.value();
}

}  // namespace

const std::vector<std::string>& catalog_ids() {
  static const std::vector<std::string> ids{"scalings",   "dilatation", "rotation", "lorentz",
                                            "projective", "stretch",    "galilean"};
  return ids;
}

std::vector<CatalogEntry> catalog_list() {
  std::vector<CatalogEntry> out;
  for (const auto& id : catalog_ids()) out.push_back(catalog_get(id));
  return out;
}

CatalogEntry catalog_get(std::string_view id, std::optional<Rational> k) {
  if (id.rfind("stretch(", 0) == 0 && id.size() > 9 && id.back() == ')') {
    Rational inner = parse_k(id.substr(8, id.size() - 9));
    if (k && *k != inner) throw SpecError("conflicting stretch parameters");
    return stretch(inner);
  }
  if (k && id != "stretch") throw SpecError("only the stretch group takes a parameter k");
  if (id == "scalings") return scalings();
  if (id == "dilatation") return dilatation();
  if (id == "rotation") return rotation();
  if (id == "lorentz") return lorentz();
  if (id == "projective") return projective();
  if (id == "stretch") return stretch(k ? *k : Rational(2));
  if (id == "galilean") return galilean();
  std::string known;
  for (const auto& s : catalog_ids()) known += (known.empty() ? "" : ", ") + s;
  throw SpecError("unknown catalog id '" + std::string(id) + "' (known: " + known + ")");
}

Expr bind_ufuncs(const Expr& e, const std::map<std::string, Expr>& bindings,
                 const std::map<std::string, std::size_t>& arities) {
  Expr out = e;
  for (const auto& [name, body] : bindings) {
    auto it = arities.find(name);
    if (it == arities.end()) throw SpecError("no function symbol '" + name + "' to bind");
    const std::size_t a = it->second;
    std::vector<std::string> params = slot_names(a);
    auto fv = free_variables(body);
    if (a == 1 && fv.count("s")) {
      if (fv.count("s1")) throw SpecError("binding for '" + name + "' mixes s and s1");
      params = {"s"};
    }
    for (const auto& v : fv) {
      if (std::find(params.begin(), params.end(), v) == params.end())
        throw SpecError("binding for '" + name + "' (arity " + std::to_string(a) + ") uses '" + v +
                        "'; expected " + (a == 1 ? std::string("s") : "s1..s" + std::to_string(a)));
    }
    out = substitute_ufunc(out, name, params, body);
  }
  return out;
}

SystemSpec catalog_instantiate(const CatalogEntry& entry, const std::map<std::string, Expr>& bindings) {
  SystemSpec s = entry.templ;
  for (auto& row : s.f) {
    for (auto& e : row) e = bind_ufuncs(e, bindings, entry.ufuncs);
  }
  return s;
}

SystemSpec catalog_instantiate(std::string_view id, const std::map<std::string, Expr>& bindings,
                               std::optional<Rational> k) {
  return catalog_instantiate(catalog_get(id, k), bindings);
}

}  // namespace liesynth
