#pragma once

#include "liesynth/fields.hpp"
#include "liesynth/report.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace liesynth {

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structure-constant tensor c[l][s][p] of [G_l, G_s] = sum_p c_lsp G_p,
/// antisymmetric in (l, s) by construction.
class StructureConstants {
 public:
  StructureConstants() = default;
  explicit StructureConstants(std::size_t q);

  struct Entry {
    std::size_t l, s, p;  // zero-based
    Rational value;
  };
  /// Builds the tensor from entries with l < s; the (s, l) entries are implied.
  static StructureConstants from_upper(std::size_t q, const std::vector<Entry>& entries);

  std::size_t size() const { return q_; }
  const Rational& operator()(std::size_t l, std::size_t s, std::size_t p) const;
  /// Sets c_lsp and c_slp = -c_lsp. Throws for l == s with a nonzero value.
  void set(std::size_t l, std::size_t s, std::size_t p, const Rational& v);
  bool abelian() const;

  /// Jacobi identity residuals, as human-readable messages (empty when consistent).
  std::vector<std::string> jacobi_violations() const;

  friend bool operator==(const StructureConstants&, const StructureConstants&) = default;

 private:
  std::size_t index(std::size_t l, std::size_t s, std::size_t p) const { return (l * q_ + s) * q_ + p; }
  std::size_t q_ = 0;
  std::vector<Rational> c_;
};

/// Lie group data: q operators on n variables, structure constants,
/// n - q invariants and the cylindricity index k.
struct GroupSpec {
  std::vector<std::string> variables;
  std::vector<VectorField> operators;
  StructureConstants constants;
  std::vector<Expr> invariants;
  std::size_t k = 0;

  std::size_t n() const { return variables.size(); }
  std::size_t q() const { return operators.size(); }

  /// Checks dimensions, operator variable lists, invariant count and cylindricity.
  void validate() const;
};

/// Builds and validates a GroupSpec; k = 0 means "n".
GroupSpec make_group(std::vector<std::string> variables, std::vector<VectorField> operators,
                     StructureConstants constants, std::vector<Expr> invariants, std::size_t k = 0);

/// Operators G_{q+1}..G_n completing the group operators to a commuting frame.
struct ComplementSpec {
  std::vector<VectorField> operators;
};

Report verify_structure_constants(const GroupSpec& g, const SamplerConfig& cfg,
                                  const UFuncTable* table = nullptr);
Report verify_invariants(const GroupSpec& g, const SamplerConfig& cfg,
                         const UFuncTable* table = nullptr);
Report verify_completeness(const GroupSpec& g, const SamplerConfig& cfg,
                           const UFuncTable* table = nullptr);
Report verify_complement(const GroupSpec& g, const ComplementSpec& comp, const SamplerConfig& cfg,
                         const UFuncTable* table = nullptr);

/// Group operators followed by complement operators.
std::vector<VectorField> combined_frame(const GroupSpec& g, const ComplementSpec& comp);

}  // namespace liesynth
