#pragma once

#include "liesynth/expr.hpp"
#include "liesynth/sampling.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace liesynth {

/// First-order operator sum_i g_i d/dx_i over an ordered variable list.
class VectorField {
 public:
  VectorField() = default;
  VectorField(std::vector<std::string> variables, std::vector<Expr> coordinates);

  /// Zero field on `variables`.
  static VectorField zero(std::vector<std::string> variables);

  std::size_t dimension() const { return vars_.size(); }
  const std::vector<std::string>& variables() const { return vars_; }
  const std::vector<Expr>& coordinates() const { return coords_; }
  const Expr& operator[](std::size_t i) const { return coords_[i]; }

  VectorField operator+(const VectorField& o) const;
  VectorField operator-(const VectorField& o) const;
  /// Multiplication by a scalar function.
  friend VectorField operator*(const Expr& s, const VectorField& v);

  bool structurally_zero() const;

  /// "g1 ∂x + g2 ∂y" rendering.
  std::string to_string() const;

  friend bool operator==(const VectorField& a, const VectorField& b);

 private:
  std::vector<std::string> vars_;
  std::vector<Expr> coords_;
};

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// sum_i g_i * du/dx_i. Throws FieldError if u has variables outside the field's list.
Expr apply(const VectorField& g, const Expr& u);

/// Commutator [A, B], coordinate i = A(B_i) - B(A_i).
VectorField lie_bracket(const VectorField& a, const VectorField& b);

/// True iff no coordinate depends on x_{k+1}..x_n.
bool is_cylindrical(const VectorField& g, std::size_t k);

struct RankResult {
  int generic_rank = 0;
  bool not_bound = false;
  bool inconclusive = false;
  int admissible = 0;
};

/// Generic pointwise rank of the coordinate matrix over sampled points.
RankResult rank_test(const std::vector<VectorField>& fields, const SamplerConfig& cfg,
                     const UFuncTable* table = nullptr);

/// Per-coordinate zero test of a field.
struct FieldZeroVerdict {
  bool zero = true;
  bool inconclusive = false;
  bool structural = true;
  std::size_t coordinate = 0;  // first offending coordinate
  ZeroVerdict detail;
};
FieldZeroVerdict field_is_zero(const VectorField& v, const SamplerConfig& cfg,
                               const UFuncTable* table = nullptr);

struct FrameExpansion {
  std::vector<VectorField> basis;
  /// coefficients[j][i]: coefficient of basis_i in field j.
  std::vector<std::vector<Expr>> coefficients;
};

class SingularFrame : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solves sum_i psi_i basis_i = F symbolically by Gaussian elimination over
/// the expression field. Pivots are chosen by largest mean absolute sampled
/// value (ties: lowest row). Throws SingularFrame when the frame has generic
/// rank < n, and FieldError if the round trip does not verify.
std::vector<Expr> frame_expand(const VectorField& f, const std::vector<VectorField>& basis,
                               const SamplerConfig& cfg, const UFuncTable* table = nullptr);

/// frame_expand for each field, sharing one basis.
FrameExpansion frame_expand_all(const std::vector<VectorField>& fs,
                                const std::vector<VectorField>& basis, const SamplerConfig& cfg,
                                const UFuncTable* table = nullptr);

}  // namespace liesynth
