#include "liesynth/group.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace liesynth {

StructureConstants::StructureConstants(std::size_t q) : q_(q), c_(q * q * q, Rational(0)) {}

StructureConstants StructureConstants::from_upper(std::size_t q, const std::vector<Entry>& entries) {
  StructureConstants c(q);
  for (const auto& e : entries) {
    if (e.l >= q || e.s >= q || e.p >= q)
      throw SpecError("structure constant index out of range (q = " + std::to_string(q) + ")");
    if (e.l >= e.s)
      throw SpecError("structure constants must be given with l < s; got (" +
                      std::to_string(e.l + 1) + ", " + std::to_string(e.s + 1) + ")");
    c.set(e.l, e.s, e.p, e.value);
  }
  return c;
}

const Rational& StructureConstants::operator()(std::size_t l, std::size_t s, std::size_t p) const {
  return c_[index(l, s, p)];
}

void StructureConstants::set(std::size_t l, std::size_t s, std::size_t p, const Rational& v) {
  if (l == s) {
    if (sgn(v) != 0) throw SpecError("c_llp must vanish by antisymmetry");
    return;
  }
  c_[index(l, s, p)] = v;
  c_[index(s, l, p)] = -v;
}

bool StructureConstants::abelian() const {
  for (const auto& v : c_) {
    if (sgn(v) != 0) return false;
  }
  return true;
}

std::vector<std::string> StructureConstants::jacobi_violations() const {
  std::vector<std::string> out;
  const auto& c = *this;
  for (std::size_t l = 0; l < q_; ++l) {
    for (std::size_t s = l + 1; s < q_; ++s) {
      for (std::size_t t = s + 1; t < q_; ++t) {
        for (std::size_t r = 0; r < q_; ++r) {
          Rational acc = 0;
          for (std::size_t p = 0; p < q_; ++p)
            acc += c(l, s, p) * c(p, t, r) + c(s, t, p) * c(p, l, r) + c(t, l, p) * c(p, s, r);
          if (sgn(acc) != 0) {
            out.push_back("Jacobi identity fails for (" + std::to_string(l + 1) + ", " +
                          std::to_string(s + 1) + ", " + std::to_string(t + 1) + ") component " +
                          std::to_string(r + 1) + ": " + acc.get_str());
          }
        }
      }
    }
  }
  return out;
}

void GroupSpec::validate() const {
  if (variables.empty()) throw SpecError("group has no phase variables");
  if (operators.empty() || q() > n())
    throw SpecError("group needs 1 <= q <= n operators (q = " + std::to_string(q()) +
                    ", n = " + std::to_string(n()) + ")");
  if (constants.size() != q())
    throw SpecError("structure constants sized for q = " + std::to_string(constants.size()));
  if (invariants.size() != n() - q())
    throw SpecError("expected " + std::to_string(n() - q()) + " invariant(s), got " +
                    std::to_string(invariants.size()));
  if (k < 1 || k > n()) throw SpecError("cylindricity index k must satisfy 1 <= k <= n");
  for (std::size_t l = 0; l < q(); ++l) {
    if (operators[l].variables() != variables)
      throw SpecError("operator " + std::to_string(l + 1) + " uses a different variable list");
    if (!is_cylindrical(operators[l], k))
      throw SpecError("operator " + std::to_string(l + 1) + " is not cylindrical for k = " +
                      std::to_string(k));
  }
  for (const auto& inv : invariants) {
    for (const auto& v : free_variables(inv)) {
      if (std::find(variables.begin(), variables.end(), v) == variables.end())
        throw SpecError("invariant '" + print(inv) + "' uses unknown variable '" + v + "'");
    }
  }
}

GroupSpec make_group(std::vector<std::string> variables, std::vector<VectorField> operators,
                     StructureConstants constants, std::vector<Expr> invariants, std::size_t k) {
  GroupSpec g;
  g.k = k == 0 ? variables.size() : k;
  g.variables = std::move(variables);
  g.operators = std::move(operators);
  g.constants = std::move(constants);
  g.invariants = std::move(invariants);
  g.validate();
  return g;
}

std::vector<VectorField> combined_frame(const GroupSpec& g, const ComplementSpec& comp) {
  std::vector<VectorField> out = g.operators;
  out.insert(out.end(), comp.operators.begin(), comp.operators.end());
  return out;
}

namespace {

std::string pair_name(const char* a, std::size_t i, const char* b, std::size_t j) {
  return std::string("[") + a + std::to_string(i + 1) + ", " + b + std::to_string(j + 1) + "]";
}

VectorField span_combination(const GroupSpec& g, std::size_t l, std::size_t s) {
  VectorField acc = VectorField::zero(g.variables);
  for (std::size_t p = 0; p < g.q(); ++p) {
    const Rational& c = g.constants(l, s, p);
    if (sgn(c) != 0) acc = acc + Expr(c) * g.operators[p];
  }
  return acc;
}

Report rank_report(std::string name, const RankResult& r, std::size_t expected) {
  std::string detail = "generic rank " + std::to_string(r.generic_rank) + " of " +
                       std::to_string(expected) + " (" + std::to_string(r.admissible) +
                       " admissible points)";
  Verdict v = r.inconclusive ? Verdict::Inconclusive
                             : (r.generic_rank == static_cast<int>(expected) ? Verdict::Pass
                                                                            : Verdict::Fail);
  return Report::leaf(std::move(name), v, std::move(detail));
}

}  // namespace

Report verify_structure_constants(const GroupSpec& g, const SamplerConfig& cfg,
                                  const UFuncTable* table) {
  Report rep = Report::node("structure constants");
  ReportTimer timer(rep);
  for (std::size_t l = 0; l < g.q(); ++l) {
    for (std::size_t s = l + 1; s < g.q(); ++s) {
      VectorField residual = lie_bracket(g.operators[l], g.operators[s]) - span_combination(g, l, s);
      rep.add(report_field_zero(pair_name("G", l, "G", s) + " - sum_p c_" + std::to_string(l + 1) +
                                    std::to_string(s + 1) + "p G_p",
                                field_is_zero(residual, cfg, table), residual));
    }
  }
  rep.warnings = g.constants.jacobi_violations();
  if (g.q() < 2) rep.detail = "no operator pairs";
  return rep;
}

Report verify_invariants(const GroupSpec& g, const SamplerConfig& cfg, const UFuncTable* table) {
  Report rep = Report::node("invariants");
  ReportTimer timer(rep);
  for (std::size_t t = 0; t < g.invariants.size(); ++t) {
    for (std::size_t l = 0; l < g.q(); ++l) {
      Expr r = apply(g.operators[l], g.invariants[t]);
      rep.add(report_zero("G" + std::to_string(l + 1) + " I" + std::to_string(t + 1),
                          is_zero(r, cfg, table)));
      if (rep.children.back().failed()) rep.children.back().detail += ": " + print(r);
    }
  }
  // functional independence: Jacobian of the invariants has generic rank n - q
  const std::size_t m = g.invariants.size();
  if (m > 0) {
    std::vector<Expr> jac;
    for (const auto& inv : g.invariants) {
      for (const auto& v : g.variables) jac.push_back(differentiate(inv, v));
    }
    SampleTable tab = sample_values(jac, g.variables, cfg, table, /*salt=*/41);
    RankResult rr;
    rr.admissible = static_cast<int>(tab.points.size());
    for (const auto& row : tab.values) {
      std::vector<std::vector<double>> mat(m, std::vector<double>(g.n()));
      for (std::size_t t = 0; t < m; ++t) {
        for (std::size_t i = 0; i < g.n(); ++i) mat[t][i] = row[t * g.n() + i];
      }
      rr.generic_rank = std::max(rr.generic_rank, numerical_rank(mat));
    }
    rr.inconclusive = 2 * rr.admissible < cfg.samples;
    rep.add(rank_report("functional independence", rr, m));
  }
  return rep;
}

Report verify_completeness(const GroupSpec& g, const SamplerConfig& cfg, const UFuncTable* table) {
  Report rep = Report::node("completeness");
  ReportTimer timer(rep);
  Report sc = verify_structure_constants(g, cfg, table);
  if (sc.passed()) {
    rep.detail = "implied by the structure-constant identities";
    return rep;
  }
  // Brackets must lie in the constant-coefficient span of the operators.
  const std::size_t n = g.n(), q = g.q();
  for (std::size_t l = 0; l < q; ++l) {
    for (std::size_t s = l + 1; s < q; ++s) {
      VectorField br = lie_bracket(g.operators[l], g.operators[s]);
      std::vector<Expr> exprs(br.coordinates());
      for (const auto& op : g.operators) exprs.insert(exprs.end(), op.coordinates().begin(), op.coordinates().end());
      SampleTable tab = sample_values(exprs, g.variables, cfg, table, /*salt=*/53 + l * q + s);
      std::string name = pair_name("G", l, "G", s) + " in span";
      if (2 * static_cast<int>(tab.points.size()) < cfg.samples) {
        rep.add(Report::leaf(name, Verdict::Inconclusive, "too few admissible points"));
        continue;
      }
      const Eigen::Index rows = static_cast<Eigen::Index>(tab.points.size() * n);
      Eigen::MatrixXd a(rows, static_cast<Eigen::Index>(q));
      Eigen::VectorXd b(rows);
      for (std::size_t k = 0; k < tab.points.size(); ++k) {
        for (std::size_t i = 0; i < n; ++i) {
          const Eigen::Index r = static_cast<Eigen::Index>(k * n + i);
          b(r) = tab.values[k][i];
          for (std::size_t p = 0; p < q; ++p)
            a(r, static_cast<Eigen::Index>(p)) = tab.values[k][n + p * n + i];
        }
      }
      Eigen::VectorXd coef = a.completeOrthogonalDecomposition().solve(b);
      double residual = (a * coef - b).norm();
      double scale = b.norm();
      bool ok = residual <= 1e-8 * scale + cfg.eps_abs * std::sqrt(static_cast<double>(rows));
      std::string detail = "least-squares residual " + std::to_string(residual) + ", coefficients (";
      for (Eigen::Index p = 0; p < coef.size(); ++p) detail += (p ? ", " : "") + std::to_string(coef(p));
      detail += ")";
      Report leaf = Report::leaf(name, ok ? Verdict::Pass : Verdict::Fail, detail);
      if (!ok) {
        // worst sample point as witness
        std::size_t worst = 0;
        double worst_v = -1.0;
        Eigen::VectorXd res = a * coef - b;
        for (std::size_t k = 0; k < tab.points.size(); ++k) {
          double v = res.segment(static_cast<Eigen::Index>(k * n), static_cast<Eigen::Index>(n)).norm();
          if (v > worst_v) {
            worst_v = v;
            worst = k;
          }
        }
        leaf.witness = Witness{tab.points[worst], worst_v};
      }
      rep.add(std::move(leaf));
    }
  }
  return rep;
}

Report verify_complement(const GroupSpec& g, const ComplementSpec& comp, const SamplerConfig& cfg,
                         const UFuncTable* table) {
  Report rep = Report::node("abelian complement");
  ReportTimer timer(rep);
  const std::size_t n = g.n(), q = g.q();
  if (comp.operators.size() != n - q) {
    rep.add(Report::leaf("operator count", Verdict::Fail,
                         "expected " + std::to_string(n - q) + ", got " +
                             std::to_string(comp.operators.size())));
    return rep;
  }
  for (const auto& op : comp.operators) {
    if (op.variables() != g.variables)
      throw SpecError("complement operator uses a different variable list");
  }
  std::vector<VectorField> frame = combined_frame(g, comp);
  for (std::size_t t = q; t < n; ++t) {
    for (std::size_t i = 0; i < t; ++i) {
      VectorField br = lie_bracket(frame[i], frame[t]);
      rep.add(report_field_zero(pair_name("G", i, "G", t), field_is_zero(br, cfg, table), br));
    }
  }
  rep.add(rank_report("frame rank", rank_test(frame, cfg, table), n));
  return rep;
}

}  // namespace liesynth
