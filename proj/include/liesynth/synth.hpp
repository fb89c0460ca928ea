#pragma once

#include "liesynth/admission.hpp"
#include "liesynth/parse.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace liesynth {

/// Raised when a synthesis precondition does not hold; carries the failing report.
class SynthesisError : public std::runtime_error {
 public:
  SynthesisError(const std::string& what, Report report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const Report& report() const { return report_; }

 private:
  Report report_;
};

/// Names s1..s_{n-q} of the invariant slots (plus "s" for a single slot).
std::vector<std::string> slot_names(std::size_t count);
bool is_reserved_slot_name(std::string_view name);

/// Replaces slot variables by the group's invariants: phi(s) -> phi(I(x)).
Expr compose_with_invariants(const Expr& phi, const GroupSpec& g);

/// Data for building admitting systems.
struct SynthesisInput {
  GroupSpec group;
  ComplementSpec complement;
  /// m x q expressions in the phase variables (nonabelian construction).
  std::vector<std::vector<Expr>> psi;
  /// m x q expressions in slot variables (abelian construction).
  std::vector<std::vector<Expr>> group_phi;
  /// m x (n - q) expressions in slot variables.
  std::vector<std::vector<Expr>> complement_phi;

  std::size_t m() const;
  /// Dimension and slot-variable checks.
  void validate(bool need_psi) const;
};

/// F_j = sum_l phi_jl(I) G_l + sum_tau phi_jtau(I) G_tau for an abelian group.
SystemSpec synthesize_abelian(const SynthesisInput& inp, const SamplerConfig& cfg = {},
                              const UFuncTable* table = nullptr);

struct SynthesisResult {
  SystemSpec system;
  Report report;
};

/// F_j = sum_l psi_jl G_l + sum_tau phi_jtau(I) G_tau; emission is refused
/// (SynthesisError) unless the structure constants, the complement and the
/// psi conditions verify. Abelian groups with group_phi delegate to
/// synthesize_abelian.
SynthesisResult synthesize_nonabelian(const SynthesisInput& inp, const SamplerConfig& cfg,
                                      const UFuncTable* table = nullptr);

/// Solvability plus admission of an emitted system; "certified" iff both pass.
Report check_synthesis(const SystemSpec& s, const SynthesisInput& inp, const SamplerConfig& cfg,
                       const UFuncTable* table = nullptr);

// ---------------------------------------------------------------------------
// Catalog of the classical one- and multi-parameter groups.

struct CatalogEntry {
  std::string id;
  std::string title;
  GroupSpec group;
  ComplementSpec complement;
  /// Finite transformations of the group, for documentation.
  std::string transformation;
  /// Template system with free ufunc symbols.
  SystemSpec templ;
  std::map<std::string, std::size_t> ufuncs;
};

const std::vector<std::string>& catalog_ids();
std::vector<CatalogEntry> catalog_list();
/// `id` may be "stretch(3/2)"; otherwise `k` parameterizes the stretch group (default 2).
CatalogEntry catalog_get(std::string_view id, std::optional<Rational> k = std::nullopt);

/// Substitutes ufunc bindings (bodies in s / s1..) into the entry's template.
/// Unbound symbols stay symbolic.
SystemSpec catalog_instantiate(const CatalogEntry& entry, const std::map<std::string, Expr>& bindings);
SystemSpec catalog_instantiate(std::string_view id, const std::map<std::string, Expr>& bindings,
                               std::optional<Rational> k = std::nullopt);

/// Replaces ufunc calls using bindings; the body of symbol f of arity a may
/// use "s" (a = 1) or s1..sa.
Expr bind_ufuncs(const Expr& e, const std::map<std::string, Expr>& bindings,
                 const std::map<std::string, std::size_t>& arities);

}  // namespace liesynth
