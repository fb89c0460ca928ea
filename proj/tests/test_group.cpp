#include "support.hpp"

using namespace ts;

namespace {

const std::vector<std::string> XY{"x", "y"};

GroupSpec rotation_group(const std::string& invariant = "x^2 + y^2") {
  return make_group(XY, {F(XY, {"-y", "x"})}, StructureConstants(1), {P(invariant)});
}

GroupSpec affine_line(const std::vector<StructureConstants::Entry>& c) {
  return make_group(XY, {F(XY, {"1", "0"}), F(XY, {"x", "0"})}, StructureConstants::from_upper(2, c), {},
                    1);
}

// Scales operator l by lam and transforms c so that the bracket relations keep holding.
GroupSpec rescale(const GroupSpec& g, std::size_t l, const Rational& lam) {
  GroupSpec out = g;
  out.operators[l] = Expr(lam) * g.operators[l];
  const std::size_t q = g.q();
  StructureConstants c(q);
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t b = a + 1; b < q; ++b) {
      for (std::size_t p = 0; p < q; ++p) {
        Rational v = g.constants(a, b, p);
        if (a == l || b == l) v *= lam;
        if (p == l) v /= lam;
        c.set(a, b, p, v);
      }
    }
  }
  out.constants = c;
  return out;
}

}  // namespace

TEST_CASE("StructureConstants: antisymmetry is enforced") {
  StructureConstants c = StructureConstants::from_upper(3, {{0, 1, 2, Rational(2)}, {1, 2, 0, Rational(-1, 2)}});
  CHECK(c(0, 1, 2) == 2);
  CHECK(c(1, 0, 2) == -2);
  CHECK(c(2, 1, 0) == Rational(1, 2));
  CHECK_FALSE(c.abelian());
  CHECK(StructureConstants(3).abelian());
  CHECK_THROWS_AS(StructureConstants::from_upper(2, {{1, 0, 0, Rational(1)}}), SpecError);
  CHECK_THROWS_AS(StructureConstants::from_upper(2, {{0, 2, 0, Rational(1)}}), SpecError);
  CHECK_THROWS_AS(c.set(1, 1, 0, Rational(1)), SpecError);
}

TEST_CASE("StructureConstants: Jacobi violations are advisory") {
  // so(3): [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2
  StructureConstants so3 = StructureConstants::from_upper(
      3, {{0, 1, 2, Rational(1)}, {1, 2, 0, Rational(1)}, {0, 2, 1, Rational(-1)}});
  CHECK(so3.jacobi_violations().empty());
  StructureConstants bad = StructureConstants::from_upper(3, {{0, 1, 0, Rational(1)}, {1, 2, 1, Rational(1)}});
  CHECK_FALSE(bad.jacobi_violations().empty());
}

TEST_CASE("GroupSpec validation") {
  CHECK_THROWS_AS(make_group(XY, {F(XY, {"-y", "x"})}, StructureConstants(1), {}), SpecError);
  CHECK_THROWS_AS(make_group(XY, {F(XY, {"-y", "x"})}, StructureConstants(2), {P("x^2+y^2")}), SpecError);
  CHECK_THROWS_AS(make_group(XY, {F(XY, {"-y", "x"})}, StructureConstants(1), {P("x^2+y^2")}, 1),
                  SpecError);
  CHECK_THROWS_AS(make_group(XY, {F(XY, {"-y", "x"})}, StructureConstants(1), {P("x^2+z^2")}), SpecError);
  CHECK_THROWS_AS(make_group(XY, {F({"x", "z"}, {"-z", "x"})}, StructureConstants(1), {P("x")}), SpecError);
  CHECK_NOTHROW(rotation_group());
}

TEST_CASE("verify_structure_constants") {
  SamplerConfig cfg;
  SUBCASE("scaling group with all constants zero") {
    std::vector<std::string> v{"x1", "x2", "x3"};
    GroupSpec g = make_group(v, {F(v, {"x1", "0", "0"}), F(v, {"0", "x2", "0"})}, StructureConstants(2),
                             {P("x3")}, 2);
    CHECK(verify_structure_constants(g, cfg).passed());
  }
  SUBCASE("affine line with c121 = 1") {
    Report r = verify_structure_constants(affine_line({{0, 1, 0, Rational(1)}}), cfg);
    CHECK(r.passed());
    CHECK(r.children.size() == 1);
  }
  SUBCASE("affine line with wrong constants") {
    Report r = verify_structure_constants(affine_line({}), cfg);
    CHECK(r.failed());
    const Report* f = r.first_failure();
    REQUIRE(f != nullptr);
    REQUIRE(f->witness.has_value());
    CHECK(f->witness->residual == doctest::Approx(1.0));
  }
  SUBCASE("sign matters") {
    CHECK(verify_structure_constants(affine_line({{0, 1, 0, Rational(-1)}}), cfg).failed());
  }
}

TEST_CASE("verify_structure_constants: consistent rescaling keeps the verdict") {
  SamplerConfig cfg;
  for (const Rational& lam : {Rational(2), Rational(-3, 7), Rational(5, 2)}) {
    for (std::size_t l : {0u, 1u}) {
      CHECK(verify_structure_constants(rescale(affine_line({{0, 1, 0, Rational(1)}}), l, lam), cfg).passed());
      CHECK(verify_structure_constants(rescale(affine_line({}), l, lam), cfg).failed());
    }
  }
}

TEST_CASE("verify_invariants") {
  SamplerConfig cfg;
  CHECK(verify_invariants(rotation_group(), cfg).passed());

  GroupSpec stretch = make_group(XY, {F(XY, {"x", "2*y"})}, StructureConstants(1), {P("x^2/y")});
  CHECK(verify_invariants(stretch, cfg).passed());

  Report bad = verify_invariants(rotation_group("x^2 - y^2"), cfg);
  CHECK(bad.failed());
  const Report* f = bad.first_failure();
  REQUIRE(f != nullptr);
  REQUIRE(f->witness.has_value());
  const Point& w = f->witness->point;
  CHECK(std::abs(f->witness->residual) == doctest::Approx(std::abs(4 * w.at("x") * w.at("y"))));
}

TEST_CASE("verify_invariants: dependent invariants fail independence") {
  SamplerConfig cfg;
  std::vector<std::string> v{"x", "y", "z"};
  GroupSpec g = make_group(v, {F(v, {"0", "0", "1"})}, StructureConstants(1), {P("x"), P("2*x")});
  Report r = verify_invariants(g, cfg);
  CHECK(r.failed());
  CHECK(r.first_failure()->name == "functional independence");
}

TEST_CASE("verify_completeness") {
  SamplerConfig cfg;
  SUBCASE("implied by structure constants") {
    Report r = verify_completeness(affine_line({{0, 1, 0, Rational(1)}}), cfg);
    CHECK(r.passed());
    CHECK(r.children.empty());
  }
  SUBCASE("brackets in span, constants not supplied") {
    std::vector<std::string> v{"x", "y", "z"};
    GroupSpec g = make_group(v, {F(v, {"1", "0", "0"}), F(v, {"0", "1", "0"}), F(v, {"0", "x", "0"})},
                             StructureConstants(3), {});
    CHECK(verify_structure_constants(g, cfg).failed());
    Report r = verify_completeness(g, cfg);
    CHECK(r.passed());
  }
  SUBCASE("bracket outside the span") {
    GroupSpec g = make_group(XY, {F(XY, {"0", "x"}), F(XY, {"y", "0"})}, StructureConstants(2), {});
    Report r = verify_completeness(g, cfg);
    CHECK(r.failed());
    REQUIRE(r.first_failure()->witness.has_value());
  }
}

TEST_CASE("verify_structure_constants passing implies completeness on the catalog") {
  SamplerConfig cfg;
  for (const auto& e : catalog_list()) {
    CAPTURE(e.id);
    REQUIRE(verify_structure_constants(e.group, cfg).passed());
    CHECK(verify_completeness(e.group, cfg).passed());
  }
}

TEST_CASE("verify_complement") {
  SamplerConfig cfg;
  SUBCASE("rotation with Euler field") {
    CHECK(verify_complement(rotation_group(), {{F(XY, {"x", "y"})}}, cfg).passed());
  }
  SUBCASE("projective group") {
    GroupSpec g = make_group(XY, {F(XY, {"x^2", "x*y"})}, StructureConstants(1), {P("x/y")});
    CHECK(verify_complement(g, {{F(XY, {"x*y", "x + y^2"})}}, cfg).passed());
  }
  SUBCASE("proportional complement fails the rank condition") {
    Report r = verify_complement(rotation_group(), {{F(XY, {"-2*y", "2*x"})}}, cfg);
    CHECK(r.failed());
    CHECK(r.first_failure()->name == "frame rank");
  }
  SUBCASE("non-commuting complement") {
    Report r = verify_complement(rotation_group(), {{F(XY, {"1", "0"})}}, cfg);
    CHECK(r.failed());
    REQUIRE(r.first_failure()->witness.has_value());
  }
  SUBCASE("wrong operator count") {
    CHECK(verify_complement(rotation_group(), {}, cfg).failed());
  }
}

TEST_CASE("catalog groups: invariants, constants and complements verify") {
  SamplerConfig cfg;
  for (const auto& e : catalog_list()) {
    CAPTURE(e.id);
    CHECK(verify_invariants(e.group, cfg).passed());
    CHECK(verify_complement(e.group, e.complement, cfg).passed());
    for (const auto& op : e.group.operators) CHECK(is_cylindrical(op, e.group.k));
  }
}
