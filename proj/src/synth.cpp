#include "liesynth/synth.hpp"

#include <algorithm>

namespace liesynth {

std::vector<std::string> slot_names(std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= count; ++i) out.push_back("s" + std::to_string(i));
  return out;
}

bool is_reserved_slot_name(std::string_view name) {
  if (name.empty() || name.front() != 's') return false;
  return std::all_of(name.begin() + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; });
}

Expr compose_with_invariants(const Expr& phi, const GroupSpec& g) {
  Bindings b;
  auto names = slot_names(g.invariants.size());
  for (std::size_t i = 0; i < names.size(); ++i) b[names[i]] = g.invariants[i];
  if (g.invariants.size() == 1) b["s"] = g.invariants.front();
  for (const auto& v : free_variables(phi)) {
    if (!b.count(v))
      throw SpecError("binding '" + print(phi) + "' uses '" + v + "', which is not one of the " +
                      std::to_string(g.invariants.size()) + " invariant slot(s)");
  }
  return substitute(phi, b);
}

std::size_t SynthesisInput::m() const {
  return std::max({psi.size(), group_phi.size(), complement_phi.size()});
}

void SynthesisInput::validate(bool need_psi) const {
  group.validate();
  const std::size_t n = group.n(), q = group.q();
  for (const auto& v : group.variables) {
    if (is_reserved_slot_name(v))
      throw SpecError("'" + v + "' is reserved for invariant slots and cannot be a phase variable");
  }
  if (m() == 0) throw SpecError("synthesis needs at least one system column (m >= 1)");
  auto check_block = [&](const std::vector<std::vector<Expr>>& block, std::size_t width,
                         const char* what, bool slots) {
    if (!block.empty() && block.size() != m())
      throw SpecError(std::string(what) + " has " + std::to_string(block.size()) +
                      " rows, expected m = " + std::to_string(m()));
    for (const auto& row : block) {
      if (row.size() != width)
        throw SpecError(std::string(what) + " rows need " + std::to_string(width) + " entries");
      for (const auto& e : row) {
        if (slots) {
          compose_with_invariants(e, group);  // throws on foreign variables
        } else {
          for (const auto& v : free_variables(e)) {
            if (std::find(group.variables.begin(), group.variables.end(), v) == group.variables.end())
              throw SpecError(std::string(what) + " entry '" + print(e) + "' uses unknown variable '" +
                              v + "'");
          }
        }
      }
    }
  };
  check_block(psi, q, "psi", false);
  check_block(group_phi, q, "group phi", true);
  check_block(complement_phi, n - q, "complement phi", true);
  if (need_psi && psi.empty() && !group_phi.empty() && !group.constants.abelian())
    throw SpecError("nonabelian synthesis needs psi bindings");
  if (complement.operators.size() != n - q)
    throw SpecError("complement must have n - q = " + std::to_string(n - q) + " operators");
}

namespace {

SystemSpec assemble(const GroupSpec& g, const ComplementSpec& comp,
                    const std::vector<std::vector<Expr>>& group_coeffs,
                    const std::vector<std::vector<Expr>>& comp_coeffs, std::size_t m) {
  std::vector<VectorField> cols;
  for (std::size_t j = 0; j < m; ++j) {
    VectorField f = VectorField::zero(g.variables);
    if (!group_coeffs.empty()) {
      for (std::size_t l = 0; l < g.q(); ++l) f = f + group_coeffs[j][l] * g.operators[l];
    }
    if (!comp_coeffs.empty()) {
      for (std::size_t t = 0; t < comp.operators.size(); ++t)
        f = f + comp_coeffs[j][t] * comp.operators[t];
    }
    cols.push_back(std::move(f));
  }
  return SystemSpec::from_columns(cols);
}

std::vector<std::vector<Expr>> compose_block(const std::vector<std::vector<Expr>>& block,
                                             const GroupSpec& g) {
  std::vector<std::vector<Expr>> out;
  for (const auto& row : block) {
    std::vector<Expr> r;
    for (const auto& e : row) r.push_back(compose_with_invariants(e, g));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

SystemSpec synthesize_abelian(const SynthesisInput& inp, const SamplerConfig& cfg,
                              const UFuncTable* table) {
  inp.validate(false);
  if (!inp.group.constants.abelian())
    throw SynthesisError("abelian synthesis requires all structure constants to vanish",
                         Report::leaf("structure constants", Verdict::Fail, "nonzero entries"));
  if (!inp.psi.empty())
    throw SpecError("abelian synthesis takes phi bindings for the group block, not psi");
  Report comp = verify_complement(inp.group, inp.complement, cfg, table);
  if (!comp.passed()) throw SynthesisError("complement does not verify", comp);
  return assemble(inp.group, inp.complement, compose_block(inp.group_phi, inp.group),
                  compose_block(inp.complement_phi, inp.group), inp.m());
}

SynthesisResult synthesize_nonabelian(const SynthesisInput& inp, const SamplerConfig& cfg,
                                      const UFuncTable* table) {
  inp.validate(true);
  SynthesisResult out;
  out.report = Report::node("synthesis");
  ReportTimer timer(out.report);
  if (inp.group.constants.abelian() && inp.psi.empty()) {
    out.system = synthesize_abelian(inp, cfg, table);
    out.report.detail = "abelian group: phi(I) construction";
    out.report.add(verify_complement(inp.group, inp.complement, cfg, table));
    return out;
  }
  out.report.add(verify_structure_constants(inp.group, cfg, table));
  out.report.add(verify_complement(inp.group, inp.complement, cfg, table));
  PsiMatrix pm;
  pm.psi = inp.psi;
  if (pm.psi.empty()) pm.psi.assign(inp.m(), std::vector<Expr>(inp.group.q(), Expr(0L)));
  pm.phi_part = compose_block(inp.complement_phi, inp.group);
  out.report.add(verify_psi_conditions(pm, inp.group, cfg, table));
  if (!out.report.passed()) {
    const Report* f = out.report.first_failure();
    std::string what = "synthesis preconditions do not hold";
    if (f) what += ": " + f->name + (f->detail.empty() ? "" : " (" + f->detail + ")");
    throw SynthesisError(what, out.report);
  }
  out.system = assemble(inp.group, inp.complement, pm.psi, pm.phi_part, inp.m());
  return out;
}

Report check_synthesis(const SystemSpec& s, const SynthesisInput& inp, const SamplerConfig& cfg,
                       const UFuncTable* table) {
  Report rep = Report::node("certification");
  ReportTimer timer(rep);
  rep.add(verify_solvability(s, cfg, table));
  rep.add(verify_admission(s, inp.group, cfg, table));
  rep.detail = rep.passed() ? "certified" : "not certified";
  return rep;
}

}  // namespace liesynth
