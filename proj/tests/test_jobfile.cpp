#include "support.hpp"

#include <fstream>

using namespace ts;

namespace {

const char* kRotation = R"(# rotations
variables = x, y
ufunc = phi1/1, phi2/1

group.operator = -y ; x
group.invariant = x^2 + y^2
complement.operator = x ; y

system.column = -y + x*(1 - x^2 - y^2) ; x + y*(1 - x^2 - y^2)

phi.1.1 = phi1(s)
phi.1.2 = 1 - s

sampler.samples = 40
sampler.seed = 7
sampler.tol = 1e-8
sampler.box = -3, 3
sampler.exclusion = 0.25

numcheck.x0 = 0.1, 0
numcheck.t_end = 10
numcheck.h = 1e-3
numcheck.alphas = 0.1, 0.3, 0.7
numcheck.action = rotation
)";

struct Diag {
  std::size_t line, column;
  std::string message;
};

Diag diagnose(const std::string& text) {
  try {
    parse_job(text, "t.job");
  } catch (const JobError& e) {
    CHECK(std::string(e.what()).rfind("t.job:" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": ", 0) == 0);
    return {e.line(), e.column(), e.message()};
  }
  FAIL("expected a JobError for:\n" << text);
  return {};
}

}  // namespace

TEST_CASE("parse a complete job") {
  JobFile j = parse_job(kRotation, "rot.job");
  CHECK(j.source == "rot.job");
  CHECK(j.variables == std::vector<std::string>{"x", "y"});
  CHECK(j.ufuncs.arity("phi1") == 1u);
  REQUIRE(j.group.has_value());
  CHECK(j.group->q() == 1);
  CHECK(j.group->operators[0] == F({"x", "y"}, {"-y", "x"}));
  CHECK(j.group->constants.abelian());
  CHECK(j.group->k == 2);
  REQUIRE(j.complement.has_value());
  CHECK(j.complement->operators.size() == 1);
  REQUIRE(j.system.has_value());
  CHECK(j.system->m() == 1);
  CHECK(j.phi.size() == 2);
  CHECK(j.phi.at({0, 1}) == P("1 - s"));

  SamplerConfig cfg = j.sampler_config();
  CHECK(cfg.samples == 40);
  CHECK(cfg.seed == 7);
  CHECK(cfg.eps_abs == 1e-8);
  CHECK(cfg.eps_rel == 1e-8);
  CHECK(cfg.box_lo == -3);
  CHECK(cfg.box_hi == 3);
  CHECK(cfg.exclusion == 0.25);

  CHECK(j.numcheck.x0 == State{0.1, 0.0});
  CHECK(j.numcheck.t_end == 10.0);
  CHECK(j.numcheck.h == 1e-3);
  CHECK(j.numcheck.alphas == std::vector<double>{0.1, 0.3, 0.7});
  CHECK(j.numcheck.action == "rotation");
}

TEST_CASE("structure constants, cylindricity and psi bindings") {
  JobFile j = parse_job(R"(
variables = x, y, z
group.operator = 1 ; 0 ; 0
group.operator = x ; y ; 0
group.c = 1 2 1 = 1
group.invariant = z
group.k = 2
complement.operator = 0 ; 0 ; z
psi.1.1 = -x
psi.1.2 = 1
phi.1.3 = s^2
)");
  REQUIRE(j.group.has_value());
  CHECK(j.group->constants(0, 1, 0) == 1);
  CHECK(j.group->constants(1, 0, 0) == -1);
  CHECK(j.group->k == 2);
  SynthesisInput in = j.synthesis_input(Construction::General);
  CHECK(in.psi.size() == 1);
  CHECK(in.psi[0][0] == P("-x"));
  CHECK(in.complement_phi[0][0] == P("s^2"));
  CHECK_THROWS_AS(j.synthesis_input(Construction::Abelian), SpecError);
}

TEST_CASE("synthesis_input for the abelian construction") {
  JobFile j = parse_job(kRotation);
  SynthesisInput in = j.synthesis_input(Construction::Abelian);
  REQUIRE(in.group_phi.size() == 1);
  CHECK(in.group_phi[0][0] == P("phi1(s)"));
  CHECK(in.complement_phi[0][0] == P("1 - s"));
  CHECK(in.psi.empty());

  JobFile mixed = parse_job(std::string(kRotation) + "psi.1.1 = 1\n");
  CHECK_THROWS_AS(mixed.synthesis_input(Construction::General), SpecError);  // phi.1.1 sits in the group block
}

TEST_CASE("catalog shorthand") {
  JobFile j = parse_job("catalog = stretch\ncatalog.k = 3/2\nphi.1.2 = s\n");
  CHECK(j.catalog == "stretch(3/2)");
  REQUIRE(j.group.has_value());
  CHECK(j.group->invariants[0] == P("x^(3/2)/y"));
  CHECK(j.ufuncs.contains("phi1"));

  JobFile c = job_from_catalog(catalog_get("scalings"));
  CHECK(c.variables == std::vector<std::string>{"x1", "x2", "x3"});
  REQUIRE(c.system.has_value());
  CHECK(c.system->m() == 2);
}

TEST_CASE("write_job round trip") {
  for (const auto& e : catalog_list()) {
    CAPTURE(e.id);
    JobFile j = job_from_catalog(e);
    std::string text = write_job(j);
    JobFile back = parse_job(text);
    REQUIRE(back.group.has_value());
    CHECK(back.variables == j.variables);
    CHECK(back.group->operators == j.group->operators);
    CHECK(back.group->constants == j.group->constants);
    CHECK(back.group->invariants == j.group->invariants);
    CHECK(back.group->k == j.group->k);
    CHECK(back.complement->operators == j.complement->operators);
    CHECK(back.system->f == j.system->f);
    CHECK(back.ufuncs.symbols() == j.ufuncs.symbols());
    CHECK(write_job(back) == text);
  }
  JobFile nonab = parse_job(R"(
variables = x, y, z
group.operator = 1 ; 0 ; 0
group.operator = x ; y ; 0
group.c = 1 2 1 = -3/2
group.invariant = z
group.k = 2
complement.operator = 0 ; 0 ; z
psi.1.1 = -x
phi.1.3 = s^2
)");
  JobFile back = parse_job(write_job(nonab));
  CHECK(back.group->constants == nonab.group->constants);
  CHECK(back.group->k == 2);
  CHECK(back.psi == nonab.psi);
  CHECK(back.phi == nonab.phi);
}

TEST_CASE("diagnostics carry line and column") {
  SUBCASE("malformed expression") {
    Diag d = diagnose("variables = x, y\nsystem.column = x + * y ; y\n");
    CHECK(d.line == 2);
    CHECK(d.column == 21);
  }
  SUBCASE("unbalanced parenthesis at the end") {
    Diag d = diagnose("variables = x, y\nsystem.column = (x + y ; y\n");
    CHECK(d.line == 2);
    CHECK(d.column == 23);
  }
  SUBCASE("unknown variable") {
    Diag d = diagnose("variables = x, y\n\n  system.column = x ; y*z\n");
    CHECK(d.line == 3);
    CHECK(d.column == 25);
    CHECK(d.message.find("unknown variable 'z'") != std::string::npos);
    CHECK(diagnose("variables = x\nsystem.column = exp(x) + e\n").column == 26);
  }
  SUBCASE("undeclared function") {
    Diag d = diagnose("variables = x, y\nsystem.column = x ; f(y)\n");
    CHECK(d.line == 2);
    CHECK(d.column == 21);
  }
  SUBCASE("arity mismatch") {
    Diag d = diagnose("variables = x\nufunc = g/2\nsystem.column = g(x)\n");
    CHECK(d.line == 3);
    CHECK(d.column == 17);
  }
  SUBCASE("missing equals sign") {
    Diag d = diagnose("variables = x\n   system.column x\n");
    CHECK(d.line == 2);
    CHECK(d.column == 4);
  }
  SUBCASE("unknown key") {
    Diag d = diagnose("variables = x\nsystem.row = x\n");
    CHECK(d.line == 2);
    CHECK(d.column == 1);
    CHECK(d.message == "unknown key 'system.row'");
  }
  SUBCASE("coordinate count") {
    Diag d = diagnose("variables = x, y\ngroup.operator = -y\ngroup.invariant = x^2+y^2\n");
    CHECK(d.line == 2);
    CHECK(d.message.find("2 coordinates") != std::string::npos);
  }
  SUBCASE("reserved variable names") {
    CHECK(diagnose("variables = x, s\n").column == 16);
    CHECK(diagnose("variables = t\n").column == 13);
    CHECK(diagnose("variables = x, s2\n").message.find("reserved") != std::string::npos);
  }
  SUBCASE("duplicate variable") { CHECK(diagnose("variables = x, x\n").column == 16); }
  SUBCASE("structure constants given with l > s") {
    Diag d = diagnose("variables = x, y\ngroup.operator = 1 ; 0\ngroup.operator = x ; 0\ngroup.c = 2 1 1 = 1\ngroup.k = 1\n");
    CHECK(d.line == 4);
  }
  SUBCASE("invariant count") {
    Diag d = diagnose("variables = x, y\ngroup.operator = -y ; x\n");
    CHECK(d.line == 2);
    CHECK(d.message.find("invariant") != std::string::npos);
  }
  SUBCASE("bad numbers") {
    CHECK(diagnose("variables = x\nsampler.samples = many\n").column == 19);
    CHECK(diagnose("variables = x\nsampler.samples = 0\n").line == 2);
    CHECK(diagnose("variables = x\nsampler.tol = -1\n").line == 2);
    CHECK(diagnose("variables = x, y\nnumcheck.x0 = 1\n").line == 2);
  }
  SUBCASE("binding indices") {
    CHECK(diagnose("variables = x, y\nphi.1.3 = s\n").line == 2);
    CHECK(diagnose("variables = x, y\nphi.0.1 = s\n").line == 2);
    CHECK(diagnose("variables = x, y\nphi.1 = s\n").line == 2);
    CHECK(diagnose("variables = x, y\nphi.1.1 = x\n").message.find("unknown variable 'x'") != std::string::npos);
    CHECK(diagnose("variables = x, y\nphi.1.1 = s\nphi.1.1 = 1\n").line == 3);
  }
  SUBCASE("catalog problems") {
    CHECK(diagnose("catalog = affine\n").column == 11);
    CHECK(diagnose("catalog = rotation\ngroup.operator = 1 ; 0\n").line == 2);
    CHECK(diagnose("variables = u, v\ncatalog = rotation\n").line == 2);
    CHECK(diagnose("catalog = stretch\ncatalog.k = 1\n").line == 1);
  }
  SUBCASE("empty and variable-free jobs") {
    CHECK(diagnose("").line == 1);
    CHECK(diagnose("# nothing\n").line == 1);
    CHECK(diagnose("system.column = 1\n").line == 1);
  }
  SUBCASE("built-in function as ufunc") { CHECK(diagnose("variables = x\nufunc = sin/1\n").column == 9); }
}

TEST_CASE("load_job") {
  const std::string path = "test_jobfile_tmp.job";
  {
    std::ofstream out(path);
    out << kRotation;
  }
  JobFile j = load_job(path);
  CHECK(j.source == path);
  CHECK(j.system.has_value());
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_job("/nonexistent/dir/x.job"), JobError);
}
