#include "liesynth/admission.hpp"

namespace liesynth {

void SystemSpec::validate() const {
  if (variables.empty()) throw SpecError("system has no phase variables");
  if (f.size() != n())
    throw SpecError("system matrix has " + std::to_string(f.size()) + " rows for " +
                    std::to_string(n()) + " variables");
  const std::size_t cols = m();
  if (cols == 0) throw SpecError("system matrix has no columns");
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i].size() != cols) throw SpecError("system matrix rows have unequal length");
    for (const auto& e : f[i]) {
      for (const auto& v : free_variables(e)) {
        if (std::find(variables.begin(), variables.end(), v) == variables.end())
          throw SpecError("entry '" + print(e) + "' depends on '" + v +
                          "', which is not a phase variable");
      }
    }
  }
}

SystemSpec SystemSpec::from_columns(const std::vector<VectorField>& columns) {
  if (columns.empty()) throw SpecError("system needs at least one column");
  SystemSpec s;
  s.variables = columns.front().variables();
  s.f.assign(s.variables.size(), std::vector<Expr>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].variables() != s.variables) throw SpecError("columns over different variables");
    for (std::size_t i = 0; i < s.variables.size(); ++i) s.f[i][j] = columns[j][i];
  }
  return s;
}

std::vector<VectorField> system_operators(const SystemSpec& s) {
  std::vector<VectorField> out;
  for (std::size_t j = 0; j < s.m(); ++j) {
    std::vector<Expr> col;
    for (std::size_t i = 0; i < s.n(); ++i) col.push_back(s.f[i][j]);
    out.emplace_back(s.variables, std::move(col));
  }
  return out;
}

Report verify_solvability(const SystemSpec& s, const SamplerConfig& cfg, const UFuncTable* table) {
  Report rep = Report::node("complete solvability");
  ReportTimer timer(rep);
  auto ops = system_operators(s);
  for (std::size_t j = 0; j < ops.size(); ++j) {
    for (std::size_t z = j + 1; z < ops.size(); ++z) {
      VectorField br = lie_bracket(ops[j], ops[z]);
      rep.add(report_field_zero("[F" + std::to_string(j + 1) + ", F" + std::to_string(z + 1) + "]",
                                field_is_zero(br, cfg, table), br));
    }
  }
  if (ops.size() < 2) rep.detail = "single column: no pairs to check";
  return rep;
}

Report verify_admission(const SystemSpec& s, const GroupSpec& g, const SamplerConfig& cfg,
                        const UFuncTable* table) {
  if (s.variables != g.variables) throw SpecError("system and group use different phase variables");
  Report rep = Report::node("admission");
  ReportTimer timer(rep);
  auto ops = system_operators(s);
  for (std::size_t l = 0; l < g.q(); ++l) {
    for (std::size_t j = 0; j < ops.size(); ++j) {
      VectorField br = lie_bracket(g.operators[l], ops[j]);
      rep.add(report_field_zero("[G" + std::to_string(l + 1) + ", F" + std::to_string(j + 1) + "]",
                                field_is_zero(br, cfg, table), br));
    }
  }
  return rep;
}

Decomposition decompose(const SystemSpec& s, const GroupSpec& g, const ComplementSpec& comp,
                        const SamplerConfig& cfg, const UFuncTable* table) {
  if (s.variables != g.variables) throw SpecError("system and group use different phase variables");
  Decomposition out;
  out.report = Report::node("decomposition");
  ReportTimer timer(out.report);
  const std::size_t q = g.q();
  FrameExpansion fe = frame_expand_all(system_operators(s), combined_frame(g, comp), cfg, table);
  for (const auto& row : fe.coefficients) {
    out.coefficients.psi.emplace_back(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(q));
    out.coefficients.phi_part.emplace_back(row.begin() + static_cast<std::ptrdiff_t>(q), row.end());
  }
  out.report.add(verify_psi_conditions(out.coefficients, g, cfg, table));
  return out;
}

Report verify_psi_conditions(const PsiMatrix& p, const GroupSpec& g, const SamplerConfig& cfg,
                             const UFuncTable* table) {
  Report rep = Report::node("psi conditions");
  ReportTimer timer(rep);
  const std::size_t q = g.q();
  for (std::size_t j = 0; j < p.psi.size(); ++j) {
    if (p.psi[j].size() != q)
      throw SpecError("psi row " + std::to_string(j + 1) + " has " + std::to_string(p.psi[j].size()) +
                      " entries, expected q = " + std::to_string(q));
    for (std::size_t l = 0; l < q; ++l) {
      for (std::size_t t = 0; t < q; ++t) {
        std::vector<Expr> terms{apply(g.operators[l], p.psi[j][t])};
        for (std::size_t s = 0; s < q; ++s) {
          const Rational& c = g.constants(l, s, t);
          if (sgn(c) != 0) terms.push_back(Expr(c) * p.psi[j][s]);
        }
        Expr r = make_sum(std::move(terms));
        std::string name = "G" + std::to_string(l + 1) + " psi_" + std::to_string(j + 1) +
                           std::to_string(t + 1) + " + sum_p c_" + std::to_string(l + 1) + "p" +
                           std::to_string(t + 1) + " psi_" + std::to_string(j + 1) + "p";
        Report leaf = report_zero(std::move(name), is_zero(r, cfg, table));
        if (leaf.failed()) leaf.detail += ": " + print(r);
        rep.add(std::move(leaf));
      }
    }
  }
  for (std::size_t j = 0; j < p.phi_part.size(); ++j) {
    for (std::size_t t = 0; t < p.phi_part[j].size(); ++t) {
      for (std::size_t l = 0; l < q; ++l) {
        Expr r = apply(g.operators[l], p.phi_part[j][t]);
        std::string name = "G" + std::to_string(l + 1) + " phi_" + std::to_string(j + 1) +
                           std::to_string(q + t + 1) + " (l=" + std::to_string(l + 1) +
                           ", j=" + std::to_string(j + 1) + ", tau=" + std::to_string(q + t + 1) + ")";
        Report leaf = report_zero(std::move(name), is_zero(r, cfg, table));
        if (leaf.failed()) leaf.detail += ": " + print(r);
        rep.add(std::move(leaf));
      }
    }
  }
  return rep;
}

}  // namespace liesynth
