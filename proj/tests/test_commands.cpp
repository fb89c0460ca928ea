#include "support.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace ts;

namespace {

std::string job(const std::string& name) { return std::string(LIESYNTH_JOBS_DIR) + "/" + name; }

struct Run {
  int rc;
  std::string out, err;
};

Run run(int (*cmd)(const CommandOptions&, std::ostream&, std::ostream&), const CommandOptions& o) {
  std::ostringstream out, err;
  int rc = cmd(o, out, err);
  return {rc, out.str(), err.str()};
}

CommandOptions opts(const std::string& job_path = "") {
  CommandOptions o;
  o.job = job_path;
  return o;
}

std::string strip_comments(const std::string& text) {
  std::istringstream is(text);
  std::string line, out;
  while (std::getline(is, line)) {
    if (line.rfind("#", 0) != 0) out += line + "\n";
  }
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("verify: admitting job passes") {
  Run r = run(cmd_verify, opts(job("rotation.job")));
  CHECK(r.rc == kExitPass);
  CHECK(r.out.find("[pass] admission") != std::string::npos);
  CHECK(r.err.empty());
}

TEST_CASE("verify: non-admitting job fails with a witness") {
  Run r = run(cmd_verify, opts(job("rotation_control.job")));
  CHECK(r.rc == kExitFail);
  CHECK(r.out.find("[fail] [G1, F1]") != std::string::npos);
  CHECK(r.out.find("witness x=") != std::string::npos);
}

TEST_CASE("verify: malformed expression is an input error with its position") {
  Run r = run(cmd_verify, opts(job("malformed.job")));
  CHECK(r.rc == kExitInputError);
  CHECK(r.err.find("malformed.job:2:21:") != std::string::npos);
  CHECK(r.err.find("offset 4") != std::string::npos);
}

TEST_CASE("verify: input errors") {
  CHECK(run(cmd_verify, opts(job("missing.job"))).rc == kExitInputError);
  CHECK(run(cmd_verify, opts()).rc == kExitInputError);
  CommandOptions o = opts();
  o.catalog = "affine";
  CHECK(run(cmd_verify, o).rc == kExitInputError);
  o.catalog = "stretch";
  o.k = "1";
  CHECK(run(cmd_verify, o).rc == kExitInputError);
  o.k = "x";
  CHECK(run(cmd_verify, o).rc == kExitInputError);
  CommandOptions bad = opts(job("rotation.job"));
  bad.samples = 0;
  CHECK(run(cmd_verify, bad).rc == kExitInputError);
}

TEST_CASE("verify: catalog entries") {
  for (const auto& id : catalog_ids()) {
    if (id == "scalings") continue;
    CommandOptions o = opts();
    o.catalog = id;
    CAPTURE(id);
    CHECK(run(cmd_verify, o).rc == kExitPass);
  }
  // two free columns do not commute for arbitrary phi; admission itself holds
  CommandOptions sc = opts();
  sc.catalog = "scalings";
  sc.report = ReportFormat::Structured;
  Run r = run(cmd_verify, sc);
  CHECK(r.rc == kExitFail);
  Report rep = parse_structured(r.out);
  for (const auto& c : rep.children) {
    CAPTURE(c.name);
    CHECK(c.failed() == (c.name == "complete solvability"));
  }
  CommandOptions o = opts();
  o.catalog = "stretch";
  o.k = "3/2";
  CHECK(run(cmd_verify, o).rc == kExitPass);
}

TEST_CASE("verify: nonabelian group and Frobenius counterexample jobs") {
  CHECK(run(cmd_verify, opts(job("affine.job"))).rc == kExitPass);
  CHECK(run(cmd_verify, opts(job("affine_invalid.job"))).rc == kExitPass);  // no system block to check
  CHECK(run(cmd_verify, opts(job("scalings_frobenius.job"))).rc == kExitPass);
}

TEST_CASE("verify: exit code is a function of the structured verdict") {
  for (const char* name : {"rotation.job", "rotation_control.job", "affine.job"}) {
    CommandOptions o = opts(job(name));
    o.report = ReportFormat::Structured;
    Run r = run(cmd_verify, o);
    Report rep = parse_structured(r.out);
    CAPTURE(name);
    CHECK(r.rc == exit_code(rep.verdict));
    CHECK(parse_structured(render_structured(rep)) == rep);
  }
}

TEST_CASE("verify: verdicts are stable across seeds") {
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    CommandOptions o = opts(job("rotation.job"));
    o.seed = seed;
    CHECK(run(cmd_verify, o).rc == kExitPass);
    o.job = job("rotation_control.job");
    CHECK(run(cmd_verify, o).rc == kExitFail);
  }
}

TEST_CASE("synth: abelian construction writes the polar system") {
  CommandOptions o = opts(job("rotation.job"));
  o.construction = Construction::Abelian;
  Run r = run(cmd_synth, o);
  CHECK(r.rc == kExitPass);
  CHECK(r.err.find("certified") != std::string::npos);
  JobFile out = parse_job(r.out);
  JobFile in = load_job(job("rotation.job"));
  REQUIRE(out.system.has_value());
  for (std::size_t i = 0; i < 2; ++i) CHECK(zero(out.system->f[i][0] - in.system->f[i][0]));
}

TEST_CASE("synth: output file") {
  const std::string path = "test_commands_synth.job";
  CommandOptions o = opts(job("affine.job"));
  o.output = path;
  Run r = run(cmd_synth, o);
  CHECK(r.rc == kExitPass);
  CHECK(r.out.find("[pass] synthesis: general construction") != std::string::npos);
  JobFile written = load_job(path);
  REQUIRE(written.system.has_value());
  CHECK(zero(written.system->f[1][0] - P("y")));
  CHECK(zero(written.system->f[2][0] - P("z^2")));
  std::remove(path.c_str());
}

TEST_CASE("synth: invalid psi exits 1") {
  Run r = run(cmd_synth, opts(job("affine_invalid.job")));
  CHECK(r.rc == kExitFail);
  CHECK(r.err.find("psi conditions") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("synth: non-commuting columns are not certified") {
  Run r = run(cmd_synth, opts(job("scalings_frobenius.job")));
  CHECK(r.rc == kExitFail);
  CHECK(r.err.find("not certified") != std::string::npos);
  CHECK(r.err.find("[fail] [F1, F2]") != std::string::npos);
}

TEST_CASE("synth: catalog shorthand prints the template job") {
  CommandOptions o = opts();
  o.catalog = "stretch";
  o.k = "2";
  Run r = run(cmd_synth, o);
  CHECK(r.rc == kExitPass);
  CHECK(r.out.rfind("# stretch(2): ", 0) == 0);
  JobFile j = parse_job(strip_comments(r.out));
  REQUIRE(j.system.has_value());
  CHECK(zero(j.system->f[0][0] - P("x*phi1(x^2/y) + 2*x*phi2(x^2/y)")));
  CHECK(zero(j.system->f[1][0] - P("2*y*phi1(x^2/y) + y*phi2(x^2/y)")));
}

TEST_CASE("synth: input errors") {
  CHECK(run(cmd_synth, opts()).rc == kExitInputError);
  CHECK(run(cmd_synth, opts(job("rotation_control.job"))).rc == kExitInputError);  // no bindings
  CommandOptions o = opts(job("affine.job"));
  o.construction = Construction::Abelian;
  CHECK(run(cmd_synth, o).rc == kExitInputError);
}

TEST_CASE("bracket") {
  CommandOptions o = opts(job("rotation.job"));
  o.indices = {"G1", "G2"};
  Run r = run(cmd_bracket, o);
  CHECK(r.rc == kExitPass);
  CHECK(r.out == "0 ∂x + 0 ∂y\n");

  o.indices = {"G1", "F1"};
  CHECK(run(cmd_bracket, o).out == "0 ∂x + 0 ∂y\n");

  o.job = job("rotation_control.job");
  o.report = ReportFormat::Structured;
  auto j = nlohmann::json::parse(run(cmd_bracket, o).out);
  CHECK(j["zero"] == false);
  CHECK(j["variables"] == std::vector<std::string>{"x", "y"});
  CHECK(zero(P(j["coordinates"][1].get<std::string>()) - P("-x^2")));

  o.job = job("affine.job");
  o.report = ReportFormat::Text;
  o.indices = {"G1", "G2"};
  CHECK(run(cmd_bracket, o).out == "1 ∂x + 0 ∂y + 0 ∂z\n");

  for (auto bad : std::vector<std::vector<std::string>>{{"G1"}, {"G1", "G9"}, {"G1", "H1"}, {"G1", "Gx"}, {"G1", "F1"}}) {
    o.indices = bad;
    CHECK(run(cmd_bracket, o).rc == kExitInputError);
  }
}

TEST_CASE("catalog list") {
  Run r = run(cmd_catalog, opts());
  CHECK(r.rc == kExitPass);
  std::istringstream is(r.out);
  std::string line;
  std::vector<std::string> ids;
  while (std::getline(is, line)) ids.push_back(line.substr(0, line.find(' ')));
  CHECK(ids == catalog_ids());

  CommandOptions o = opts();
  o.report = ReportFormat::Structured;
  auto j = nlohmann::json::parse(run(cmd_catalog, o).out);
  REQUIRE(j.size() == 7);
  CHECK(j[5]["id"] == "stretch");
  CHECK(j[2]["transformation"] == "x -> x*cos(a) - y*sin(a), y -> x*sin(a) + y*cos(a)");
}

TEST_CASE("catalog get and instantiate") {
  CommandOptions o = opts();
  o.action = "get";
  o.catalog = "galilean";
  Run g = run(cmd_catalog, o);
  CHECK(g.rc == kExitPass);
  CHECK(g.out.find("# transformation: x -> x + a*y, y -> y") != std::string::npos);
  CHECK(parse_job(g.out).catalog.empty());

  o.action = "instantiate";
  o.bindings = {"phi1=1", "phi2=1"};
  Run inst = run(cmd_catalog, o);
  CHECK(inst.rc == kExitPass);
  JobFile j = parse_job(inst.out);
  CHECK(zero(j.system->f[0][0] - P("x + y")));
  CHECK(zero(j.system->f[1][0] - P("y")));

  o.bindings = {"phi1=1+*s"};
  CHECK(run(cmd_catalog, o).rc == kExitInputError);
  o.bindings = {"phi1"};
  CHECK(run(cmd_catalog, o).rc == kExitInputError);
  o.bindings = {"phi9=1"};
  CHECK(run(cmd_catalog, o).rc == kExitInputError);
  o.catalog.clear();
  CHECK(run(cmd_catalog, o).rc == kExitInputError);
  o.action = "remove";
  o.catalog = "rotation";
  CHECK(run(cmd_catalog, o).rc == kExitInputError);
}

TEST_CASE("numcheck: admitting job") {
  const std::string csv = "test_commands_traj.csv";
  CommandOptions o = opts(job("rotation.job"));
  o.csv = csv;
  Run r = run(cmd_numcheck, o);
  CHECK(r.rc == kExitPass);
  CHECK(r.out.find("alpha = 0.3") != std::string::npos);
  std::string text = slurp(csv);
  CHECK(text.rfind("t,x,y\n0,0.10000000000000001,0\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 10002);
  std::remove(csv.c_str());
}

TEST_CASE("numcheck: non-admitting job") {
  Run r = run(cmd_numcheck, opts(job("rotation_control.job")));
  CHECK(r.rc == kExitFail);
  CHECK(r.out.find("witness t=") != std::string::npos);
}

TEST_CASE("numcheck: catalog with bindings and flags") {
  CommandOptions o = opts();
  o.catalog = "rotation";
  o.bindings = {"phi1=1", "phi2=1-s"};
  o.x0 = State{0.1, 0.0};
  o.t_end = 2.0;
  o.h = 1e-2;
  o.alphas = {0.5};
  Run r = run(cmd_numcheck, o);
  CHECK(r.rc == kExitPass);
  CHECK(r.out.find("alpha = 0.5") != std::string::npos);

  o.x0 = State{0.1};
  CHECK(run(cmd_numcheck, o).rc == kExitInputError);
  o.x0.reset();
  CHECK(run(cmd_numcheck, o).rc == kExitInputError);
}

TEST_CASE("numcheck: flow of the group operator when no action is named") {
  const std::string path = "test_commands_flow.job";
  {
    std::ofstream f(path);
    f << "variables = x, y\ngroup.operator = -y ; x\ngroup.invariant = x^2 + y^2\n"
         "system.column = -y ; x\nnumcheck.x0 = 1, 0\nnumcheck.t_end = 0.5\nnumcheck.h = 1e-2\n";
  }
  Run r = run(cmd_numcheck, opts(path));
  CHECK(r.rc == kExitPass);
  std::remove(path.c_str());
}

TEST_CASE("numcheck: blow-up is inconclusive") {
  CommandOptions o = opts();
  o.catalog = "dilatation";
  o.bindings = {"phi1=1", "phi2=1"};
  o.x0 = State{1.0, 1.0};
  o.t_end = 1000.0;
  o.h = 1e-1;
  Run r = run(cmd_numcheck, o);
  CHECK(r.rc == kExitInconclusive);
  CHECK(r.err.find("inconclusive") != std::string::npos);
}

TEST_CASE("numcheck: input errors") {
  CHECK(run(cmd_numcheck, opts(job("affine.job"))).rc == kExitInputError);  // no system
  CommandOptions o = opts(job("rotation.job"));
  o.catalog = "nope";
  CHECK(run(cmd_numcheck, o).rc == kExitInputError);
}
