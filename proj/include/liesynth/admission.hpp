#pragma once

#include "liesynth/group.hpp"

#include <vector>

namespace liesynth {

/// Total-differential system dx_i = sum_j f_ij(x) dt_j: an n x m matrix.
struct SystemSpec {
  std::vector<std::string> variables;
  std::vector<std::vector<Expr>> f;  // f[i][j], i < n, j < m

  std::size_t n() const { return variables.size(); }
  std::size_t m() const { return f.empty() ? 0 : f.front().size(); }

  /// Dimensions and autonomy (entries only use the phase variables).
  void validate() const;

  /// System whose column j is the given field.
  static SystemSpec from_columns(const std::vector<VectorField>& columns);
};

/// Group-block coefficients psi (m x q) and invariant-block coefficients (m x (n - q)).
struct PsiMatrix {
  std::vector<std::vector<Expr>> psi;
  std::vector<std::vector<Expr>> phi_part;
};

/// Column j of f as the operator F_j.
std::vector<VectorField> system_operators(const SystemSpec& s);

/// Pairwise commutation of the system operators.
Report verify_solvability(const SystemSpec& s, const SamplerConfig& cfg,
                          const UFuncTable* table = nullptr);

/// [G_l, F_j] = 0 for every group operator and system column.
Report verify_admission(const SystemSpec& s, const GroupSpec& g, const SamplerConfig& cfg,
                        const UFuncTable* table = nullptr);

/// Expands each F_j in the frame G_1..G_n and checks the pieces.
struct Decomposition {
  PsiMatrix coefficients;
  Report report;
};
Decomposition decompose(const SystemSpec& s, const GroupSpec& g, const ComplementSpec& comp,
                        const SamplerConfig& cfg, const UFuncTable* table = nullptr);

/// G_l psi_jt + sum_p c_lpt psi_jp = 0 for all l, j, t, and (when present)
/// G_l phi_jtau = 0 for the invariant block.
Report verify_psi_conditions(const PsiMatrix& p, const GroupSpec& g, const SamplerConfig& cfg,
                             const UFuncTable* table = nullptr);

}  // namespace liesynth
